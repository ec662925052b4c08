// Command-line front end. Every command writes one JSON document to stdout
// (indented key/value text with --pretty). Exit codes: 0 pass, 1 a check
// failed, 2 usage, syntax or bound error.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <string>

#include "dendro/dendro.hpp"

using json = nlohmann::ordered_json;
using namespace dendro;

namespace {

struct Globals {
  int max_vertices = 4;
  int max_arity = 3;
  int degree = 3;
  bool pretty = false;
};

void render(const json& j, std::ostream& out, int indent) {
  const std::string pad(indent, ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured() && !v.empty()) {
        out << pad << k << ":\n";
        render(v, out, indent + 2);
      } else {
        out << pad << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_structured() && !v.empty()) {
        out << pad << "-\n";
        render(v, out, indent + 2);
      } else {
        out << pad << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else {
    out << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit(const json& j, const Globals& g) {
  if (g.pretty) {
    render(j, std::cout, 0);
  } else {
    std::cout << j.dump() << "\n";
  }
}

SkeletonPtr skeleton(const Globals& g) { return Skeleton::shared({g.max_vertices, g.max_arity}); }

json census_json(const DendroidalSet& x) {
  json rows = json::array();
  const auto c = x.census();
  for (int t = 0; t < x.tree_count(); ++t) {
    if (c[t]) rows.push_back({{"tree", x.skeleton().tree(t).to_string()}, {"count", c[t]}});
  }
  return rows;
}

json degree_census(const SimplicialSet& s) {
  json rows = json::array();
  const auto c = s.census();
  for (int n = 0; n <= s.dimension(); ++n) rows.push_back({{"degree", n}, {"count", c[n]}});
  return rows;
}

json set_json(const DendroidalSet& x) {
  json j;
  j["census"] = census_json(x);
  std::size_t total = 0;
  for (auto v : x.census()) total += v;
  j["nondegenerate"] = total;
  j["linear"] = degree_census(restrict(x));
  return j;
}

json report_json(const CheckReport& r) {
  json j;
  j["property"] = r.property;
  j["verdict"] = r.pass ? "pass" : "fail";
  j["bound"] = r.bound;
  j["max_arity"] = r.max_arity;
  j["problems"] = r.problems;
  if (r.witness) {
    json h = json::array();
    for (const auto& [from, to] : r.witness->horn) h.push_back({{"generator", from}, {"value", to}});
    j["witness"] = {{"clause", r.witness->clause}, {"tree", r.witness->tree}, {"face", r.witness->face},
                    {"base", r.witness->base}, {"horn", h}};
  }
  if (r.restriction_kan) {
    j["restriction_kan"] = *r.restriction_kan;
    if (r.restriction_witness) {
      j["restriction_witness"] = {{"n", r.restriction_witness->n}, {"k", r.restriction_witness->k}};
    }
  }
  return j;
}

json cube_map_json(const CubeMap& m) {
  json rules = json::array();
  for (unsigned v = 0; v < m.rule.size(); ++v) {
    std::string src;
    for (std::size_t a = 0; a < m.source_axes.size(); ++a) src += (v >> a) & 1 ? '1' : '0';
    rules.push_back({{"from", src.empty() ? "*" : src}, {"to", rule_string(m, v)}});
  }
  return {{"source_axes", m.source_axes}, {"target_axes", m.target_axes}, {"vertices", rules}};
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  CLI::App app{"Finite computations with trees, dendroidal sets and their lifting properties"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--max-vertices", g.max_vertices, "vertex bound of the tree skeleton")->check(CLI::Range(0, 7));
  app.add_option("--max-arity", g.max_arity, "arity cap")->check(CLI::Range(0, 4));
  app.add_option("--degree", g.degree, "simplicial degree bound")->check(CLI::Range(0, kSimplicialBound));
  app.add_flag("--pretty", g.pretty, "human-readable output");

  std::function<int()> action;
  auto bind = [&](CLI::App* sub, std::function<int()> f) {
    sub->fallthrough();
    sub->callback([&action, f] { action = f; });
  };

  // trees list
  auto* trees = app.add_subcommand("trees", "tree enumeration");
  trees->require_subcommand(1);
  trees->fallthrough();
  auto* trees_list = trees->add_subcommand("list", "iso classes of trees within the bounds");
  bind(trees_list, [&] {
    json list = json::array();
    for (const auto& t : enumerate_trees(g.max_vertices, g.max_arity)) {
      list.push_back({{"tree", t.to_string()}, {"vertices", t.vertex_count()}, {"edges", t.edge_count()}});
    }
    emit({{"command", "trees list"}, {"max_vertices", g.max_vertices}, {"max_arity", g.max_arity},
          {"count", list.size()}, {"trees", list}},
         g);
    return 0;
  });

  // hom
  std::string hom_s, hom_t;
  auto* hom = app.add_subcommand("hom", "morphisms S -> T in the tree category");
  hom->add_option("S", hom_s)->required();
  hom->add_option("T", hom_t)->required();
  bind(hom, [&] {
    auto s = share(parse_tree(hom_s));
    auto t = share(parse_tree(hom_t));
    json maps = json::array();
    for (const auto& m : enumerate_hom(s, t)) {
      json e = json::object();
      for (const auto& [from, to] : m.named_map()) e[from] = to;
      maps.push_back({{"edges", e}, {"class", class_name(classify(m).kind)}});
    }
    emit({{"command", "hom"}, {"source", s->to_string()}, {"target", t->to_string()}, {"count", maps.size()},
          {"morphisms", maps}},
         g);
    return 0;
  });

  // faces
  std::string faces_t;
  auto* faces_cmd = app.add_subcommand("faces", "elementary faces of a tree");
  faces_cmd->add_option("T", faces_t)->required();
  bind(faces_cmd, [&] {
    auto t = share(parse_tree(faces_t));
    json list = json::array();
    for (const auto& f : faces(t)) {
      list.push_back({{"kind", face_kind_name(f.kind)}, {"edge", f.edge}, {"face", f.map.source().to_string()}});
    }
    emit({{"command", "faces"}, {"tree", t->to_string()}, {"count", list.size()}, {"faces", list}}, g);
    return 0;
  });

  // census
  std::string census_e;
  auto* census = app.add_subcommand("census", "nondegenerate dendrices per tree shape");
  census->add_option("expr", census_e)->required();
  bind(census, [&] {
    auto x = evaluate(census_e, skeleton(g));
    json j{{"command", "census"}, {"expr", to_string(x.expr)}};
    j.update(set_json(*x.value));
    emit(j, g);
    return 0;
  });

  // horn
  std::string horn_t, horn_inner, horn_outer;
  auto* horn_cmd = app.add_subcommand("horn", "an inner or outer horn of a tree");
  horn_cmd->add_option("T", horn_t)->required();
  auto* inner_opt = horn_cmd->add_option("--inner", horn_inner, "omitted inner edge");
  auto* outer_opt = horn_cmd->add_option("--outer", horn_outer, "omitted outer vertex");
  inner_opt->excludes(outer_opt);
  bind(horn_cmd, [&] {
    auto t = parse_tree(horn_t);
    if (horn_inner.empty() == horn_outer.empty()) fail("argument", "give exactly one of --inner or --outer");
    const std::string e = horn_inner.empty() ? "ohorn(" + t.to_string() + "," + horn_outer + ")"
                                             : "ihorn(" + t.to_string() + "," + horn_inner + ")";
    auto x = evaluate(e, skeleton(g));
    const Tree& tr = *x.expr.tree;
    const FaceSpec omitted = horn_inner.empty() ? face_by_name(tr, FaceKind::Outer, horn_outer)
                                                : face_by_name(tr, FaceKind::Inner, horn_inner);
    json included = json::array();
    for (const auto& f : face_specs(tr)) {
      if (!(f == omitted)) included.push_back(std::string(face_kind_name(f.kind)) + " " + tr.name(f.edge));
    }
    json j{{"command", "horn"}, {"expr", to_string(x.expr)}, {"faces", included}};
    j.update(set_json(*x.value));
    emit(j, g);
    return 0;
  });

  // tensor
  std::string tensor_e;
  int tensor_n = 0;
  auto* tensor = app.add_subcommand("tensor", "X tensored with the n-simplex");
  tensor->add_option("expr", tensor_e)->required();
  tensor->add_option("--simplex", tensor_n, "simplex dimension")->required()->check(CLI::Range(0, kSimplicialBound));
  bind(tensor, [&] {
    const Expr e = parse_expr("tensor(" + tensor_e + "," + std::to_string(tensor_n) + ")");
    auto x = evaluate(e, skeleton(g));
    json j{{"command", "tensor"}, {"expr", to_string(x.expr)}};
    j.update(set_json(*x.value));
    emit(j, g);
    return 0;
  });

  // mapspace
  std::string ms_x, ms_y, ms_over = "nerve(comm)";
  auto* mapspace = app.add_subcommand("mapspace", "the simplicial mapping space Map_S(X, Y)");
  mapspace->add_option("X", ms_x)->required();
  mapspace->add_option("Y", ms_y)->required();
  mapspace->add_option("--over", ms_over, "base S (default: the terminal nerve(comm))");
  bind(mapspace, [&] {
    auto sk = skeleton(g);
    auto x = evaluate(ms_x, sk), y = evaluate(ms_y, sk), s = evaluate(ms_over, sk);
    auto m = mapping_space(resolve_over(x, s), resolve_over(y, s), g.degree);
    json sizes = json::array();
    for (int n = 0; n <= m.dimension(); ++n) sizes.push_back(m.size(n));
    emit({{"command", "mapspace"},
          {"source", to_string(x.expr)},
          {"target", to_string(y.expr)},
          {"over", to_string(s.expr)},
          {"degree", g.degree},
          {"simplices", sizes},
          {"census", degree_census(m)},
          {"components", pi0(m).size()}},
         g);
    return 0;
  });

  // check
  std::string check_e, check_over, check_prop;
  int check_bound = -1;
  auto* check = app.add_subcommand("check", "bounded lifting-property checks");
  check->add_option("expr", check_e)->required();
  check->add_option("--property", check_prop)
      ->required()
      ->check(CLI::IsMember({"inner-fibration", "left-fibration", "infty-operad", "dendroidal-kan",
                             "trivial-fibration", "normal-mono"}));
  check->add_option("--over", check_over, "base S for fibration properties");
  check->add_option("--bound", check_bound, "largest vertex count checked");
  bind(check, [&] {
    auto sk = skeleton(g);
    const int bound = check_bound < 0 ? g.max_vertices : check_bound;
    auto x = evaluate(check_e, sk);
    std::optional<Evaluated> s;
    if (!check_over.empty()) s = evaluate(check_over, sk);
    auto structure = [&] { return s ? resolve_over(x, *s) : to_terminal(x.value); };
    json j{{"command", "check"}, {"expr", to_string(x.expr)}};
    if (s) j["over"] = to_string(s->expr);
    bool pass = true;
    if (check_prop == "normal-mono") {
      const DendrMap f = s ? structure() : empty_map(empty_set(sk), x.value);
      auto w = is_normal_mono(f);
      pass = !w;
      j.update({{"property", check_prop}, {"verdict", pass ? "pass" : "fail"}, {"bound", g.max_vertices}});
      if (w) {
        j["witness"] = {{"tree", sk->tree(w->tree).to_string()},
                        {"dendrex", f.target->label(w->tree, w->element)},
                        {"automorphism", sk->morphism(w->automorphism).edge_map}};
      }
    } else {
      CheckReport r;
      if (check_prop == "inner-fibration") r = is_inner_fibration(structure(), bound);
      if (check_prop == "left-fibration") r = is_left_fibration(structure(), bound);
      if (check_prop == "trivial-fibration") r = is_trivial_fibration(structure(), bound);
      if (check_prop == "infty-operad") r = is_infty_operad(x.value, bound);
      if (check_prop == "dendroidal-kan") r = is_dendroidal_kan(x.value, bound);
      pass = r.pass;
      j.update(report_json(r));
    }
    emit(j, g);
    return pass ? 0 : 1;
  });

  // w
  std::string w_t, w_sig;
  auto* w = app.add_subcommand("w", "operation spaces of the W-construction on a tree");
  w->add_option("tree", w_t)->required();
  w->add_option("--sig", w_sig, "signature \"c1,c2;c\"");
  bind(w, [&] {
    auto t = share(parse_tree(w_t));
    WOperad wo = w_construction(t);
    auto row = [&](const Signature& sig) -> json {
      auto axes = wo.space(sig);
      json r{{"signature", wo.describe(sig)}, {"inhabited", axes.has_value()}};
      if (axes) r["axes"] = *axes;
      return r;
    };
    json list = json::array();
    if (!w_sig.empty()) {
      list.push_back(row(wo.parse_signature(w_sig)));
    } else {
      for (const auto& sig : wo.signatures()) list.push_back(row(sig));
    }
    emit({{"command", "w"}, {"tree", t->to_string()}, {"operations", list}}, g);
    return 0;
  });

  // straighten
  std::string st_t, st_c;
  auto* straighten = app.add_subcommand("straighten", "the straightening of a representable");
  straighten->add_option("tree", st_t)->required();
  straighten->add_option("--color", st_c, "colour c of the tree");
  bind(straighten, [&] {
    auto t = share(parse_tree(st_t));
    StraightAlgebra alg = straighten_identity(t);
    std::vector<int> colours;
    if (st_c.empty()) {
      for (int c = 0; c < t->edge_count(); ++c) colours.push_back(c);
    } else {
      colours.push_back(t->index(st_c));
    }
    json list = json::array();
    for (int c : colours) {
      json maps = json::array();
      for (const auto& sig : alg.w().signatures()) {
        if (sig.output != c) continue;
        json m = cube_map_json(alg.structure_map(sig));
        m["signature"] = alg.w().describe(sig);
        maps.push_back(m);
      }
      list.push_back({{"colour", t->name(c)}, {"axes", alg.axes(c)}, {"structure_maps", maps}});
    }
    emit({{"command", "straighten"}, {"tree", t->to_string()}, {"colours", list}}, g);
    return 0;
  });

  // anodynes
  int an_bound = -1;
  auto* anodynes = app.add_subcommand("anodynes", "generating left anodyne maps");
  anodynes->add_option("--bound", an_bound, "largest vertex count")->check(CLI::Range(0, 4));
  bind(anodynes, [&] {
    const int bound = an_bound < 0 ? g.max_vertices : an_bound;
    auto sk = Skeleton::shared({bound, g.max_arity});
    json list = json::array();
    for (const auto& a : generating_left_anodynes(*sk, bound)) {
      list.push_back({{"kind", a.kind}, {"tree", sk->tree(a.tree).to_string()}, {"description", a.description}});
    }
    emit({{"command", "anodynes"}, {"bound", bound}, {"max_arity", g.max_arity}, {"count", list.size()},
          {"maps", list}},
         g);
    return 0;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    return action ? action() : 2;
  } catch (const Error& e) {
    std::cerr << "error (" << e.kind() << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
