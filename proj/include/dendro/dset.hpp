#pragma once

// Finite dendroidal sets: presheaves on the truncated tree category of a
// Skeleton, tabulated on every tree of the skeleton. The action is stored for
// the generating morphisms only; any other morphism acts through its
// factorization.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "dendro/error.hpp"
#include "dendro/omega.hpp"
#include "dendro/operad.hpp"
#include "dendro/skeleton.hpp"
#include "dendro/sset.hpp"
#include "dendro/tree.hpp"

namespace dendro {

class DendroidalSet;
using DSetPtr = std::shared_ptr<const DendroidalSet>;

// How a dendroidal set was built, when that matters to later constructions
// (the tensor with a simplex works cell by cell on these).
struct Presentation {
  enum class Kind { Opaque, SubRepresentable, Simplicial, Coproduct };
  Kind kind = Kind::Opaque;
  // SubRepresentable: a subpresheaf of Ω[tree]; tree_index is its skeleton
  // class, iso maps tree edges to skeleton edges, and morphism_of[s][x] is
  // the skeleton morphism s -> tree_index of element x.
  TreePtr tree;
  int tree_index = -1;
  std::vector<int> iso;
  std::vector<std::vector<int>> morphism_of;
  // Simplicial: X = i_!(simplicial).
  SSetPtr simplicial;
  // Coproduct: X = parts[0] ⊔ parts[1] ⊔ ...
  std::vector<DSetPtr> parts;
};

class DendroidalSet {
 public:
  using Table = std::vector<Id>;

  DendroidalSet(SkeletonPtr skel, std::vector<std::size_t> sizes,
                std::vector<std::vector<Table>> tables, std::vector<std::vector<std::string>> labels)
      : skel_(std::move(skel)),
        sizes_(std::move(sizes)),
        tables_(std::move(tables)),
        labels_(std::move(labels)) {
    degenerate_.resize(sizes_.size());
    for (int t = 0; t < tree_count(); ++t) degenerate_[t].assign(sizes_[t], 0);
    for (int t = 0; t < tree_count(); ++t) {
      for (const auto& d : skel_->degeneracies_from(t)) {
        const int target = skel_->morphism(d.morphism).target;
        for (Id y : tables_[target][skel_->generator_slot(d.morphism)]) degenerate_[t][y] = 1;
      }
    }
  }

  const Skeleton& skeleton() const { return *skel_; }
  const SkeletonPtr& skeleton_ptr() const { return skel_; }
  int tree_count() const { return static_cast<int>(sizes_.size()); }
  std::size_t size(int t) const { return sizes_[t]; }
  std::size_t total_size() const {
    std::size_t n = 0;
    for (auto s : sizes_) n += s;
    return n;
  }

  // x·m for a generating morphism m: s -> t and x ∈ X_t.
  Id act_generator(int m, Id x) const {
    return tables_[skel_->morphism(m).target][skel_->generator_slot(m)][x];
  }
  const Table& generator_table(int m) const {
    return tables_[skel_->morphism(m).target][skel_->generator_slot(m)];
  }

  // x·m for any skeleton morphism m.
  Id act(int m, Id x) const {
    for (int g : skel_->factor(m)) x = act_generator(g, x);
    return x;
  }

  bool is_degenerate(int t, Id x) const { return degenerate_[t][x] != 0; }

  // Nondegenerate elements per tree.
  std::vector<std::size_t> census() const {
    std::vector<std::size_t> out(sizes_.size(), 0);
    for (int t = 0; t < tree_count(); ++t) {
      for (Id x = 0; x < sizes_[t]; ++x) out[t] += is_degenerate(t, x) ? 0 : 1;
    }
    return out;
  }

  const std::string& label(int t, Id x) const { return labels_[t][x]; }

  const Presentation& presentation() const { return *presentation_; }
  void set_presentation(Presentation p) { presentation_ = std::make_shared<const Presentation>(std::move(p)); }

  // Builds the tables from keyed elements; `act(key, m)` gives the key of
  // key·m for a generator m into the key's tree.
  static DendroidalSet tabulate(const SkeletonPtr& skel,
                                const std::function<std::vector<Key>(int)>& elements,
                                const std::function<Key(const Key&, int)>& act,
                                const std::function<std::string(const Key&, int)>& label,
                                std::vector<std::vector<Key>>* keys_out = nullptr) {
    const int n = skel->tree_count();
    std::vector<std::vector<Key>> keys(n);
    std::vector<std::unordered_map<Key, Id, VectorHash>> index(n);
    std::vector<std::size_t> sizes(n);
    std::vector<std::vector<std::string>> labels(n);
    for (int t = 0; t < n; ++t) {
      keys[t] = elements(t);
      sizes[t] = keys[t].size();
      index[t].reserve(keys[t].size());
      for (Id x = 0; x < keys[t].size(); ++x) {
        if (!index[t].emplace(keys[t][x], x).second) fail("internal", "duplicate dendrex key");
        labels[t].push_back(label(keys[t][x], t));
      }
    }
    std::vector<std::vector<Table>> tables(n);
    for (int t = 0; t < n; ++t) {
      for (int m : skel->generators_into(t)) {
        const int s = skel->morphism(m).source;
        Table table;
        table.reserve(keys[t].size());
        for (const auto& k : keys[t]) {
          auto it = index[s].find(act(k, m));
          if (it == index[s].end()) fail("internal", "dendrex set not closed under the action");
          table.push_back(it->second);
        }
        tables[t].push_back(std::move(table));
      }
    }
    if (keys_out) *keys_out = std::move(keys);
    return DendroidalSet(skel, std::move(sizes), std::move(tables), std::move(labels));
  }

  // The subpresheaf of elements satisfying `keep` (which must be closed
  // under the action). `inclusion[t][new id]` is the element of this set.
  DendroidalSet sub(const std::function<bool(int, Id)>& keep,
                    std::vector<std::vector<Id>>* inclusion = nullptr) const {
    const int n = tree_count();
    std::vector<std::vector<Id>> incl(n);
    std::vector<std::vector<std::int64_t>> rank(n);
    std::vector<std::size_t> sizes(n);
    std::vector<std::vector<std::string>> labels(n);
    for (int t = 0; t < n; ++t) {
      rank[t].assign(sizes_[t], -1);
      for (Id x = 0; x < sizes_[t]; ++x) {
        if (!keep(t, x)) continue;
        rank[t][x] = static_cast<std::int64_t>(incl[t].size());
        incl[t].push_back(x);
        labels[t].push_back(labels_[t][x]);
      }
      sizes[t] = incl[t].size();
    }
    std::vector<std::vector<Table>> tables(n);
    for (int t = 0; t < n; ++t) {
      for (int m : skel_->generators_into(t)) {
        const int s = skel_->morphism(m).source;
        const Table& full = tables_[t][skel_->generator_slot(m)];
        Table table;
        for (Id x : incl[t]) {
          std::int64_t r = rank[s][full[x]];
          if (r < 0) fail("internal", "subpresheaf not closed under the action");
          table.push_back(static_cast<Id>(r));
        }
        tables[t].push_back(std::move(table));
      }
    }
    if (inclusion) *inclusion = std::move(incl);
    return DendroidalSet(skel_, std::move(sizes), std::move(tables), std::move(labels));
  }

 private:
  SkeletonPtr skel_;
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<Table>> tables_;  // [target tree][generator slot][element]
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<char>> degenerate_;
  std::shared_ptr<const Presentation> presentation_ = std::make_shared<const Presentation>();
};

inline DSetPtr share(DendroidalSet x) { return std::make_shared<const DendroidalSet>(std::move(x)); }

// ---------------------------------------------------------------------------
// Maps

struct DendrMap {
  DSetPtr source;
  DSetPtr target;
  std::vector<std::vector<Id>> maps;  // per skeleton tree

  Id operator()(int t, Id x) const { return maps[t][x]; }
};

// Naturality against all generators; returns false on the first failure.
inline bool is_natural(const DendrMap& f) {
  const Skeleton& sk = f.source->skeleton();
  if (&sk != &f.target->skeleton()) return false;
  for (int t = 0; t < sk.tree_count(); ++t) {
    for (int m : sk.generators_into(t)) {
      const int s = sk.morphism(m).source;
      for (Id x = 0; x < f.source->size(t); ++x) {
        if (f(s, f.source->act_generator(m, x)) != f.target->act_generator(m, f(t, x))) return false;
      }
    }
  }
  return true;
}

inline DendrMap identity_map(const DSetPtr& x) {
  DendrMap f{x, x, std::vector<std::vector<Id>>(x->tree_count())};
  for (int t = 0; t < x->tree_count(); ++t) {
    for (Id e = 0; e < x->size(t); ++e) f.maps[t].push_back(e);
  }
  return f;
}

inline DendrMap compose(const DendrMap& g, const DendrMap& f) {
  if (f.target != g.source) fail("argument", "map boundary mismatch");
  DendrMap out{f.source, g.target, f.maps};
  for (int t = 0; t < static_cast<int>(out.maps.size()); ++t) {
    for (auto& x : out.maps[t]) x = g.maps[t][x];
  }
  return out;
}

inline bool is_injective(const DendrMap& f) {
  for (int t = 0; t < f.source->tree_count(); ++t) {
    std::vector<char> seen(f.target->size(t), 0);
    for (Id y : f.maps[t]) {
      if (seen[y]) return false;
      seen[y] = 1;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Representables, faces and horns

inline std::string edge_map_label(const Tree& source, const Tree& target, const std::vector<int>& image,
                                  const std::vector<int>& target_iso_inverse) {
  std::string s = "{";
  for (int e = 0; e < source.edge_count(); ++e) {
    s += (e ? "," : "") + source.name(e) + ":" + target.name(target_iso_inverse[image[e]]);
  }
  return s + "}";
}

inline std::vector<int> invert(const std::vector<int>& perm) {
  std::vector<int> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
  return inv;
}

// Ω[T] over the skeleton; T must lie within its bounds.
inline DSetPtr representable(const Tree& t, const SkeletonPtr& skel) {
  auto [ti, iso] = skel->locate(t);
  const auto inv = invert(iso);
  TreePtr named = share(t);
  std::vector<std::vector<Key>> keys;
  auto x = DendroidalSet::tabulate(
      skel,
      [&](int s) {
        std::vector<Key> out;
        for (int m : skel->hom(s, ti)) out.push_back({m});
        return out;
      },
      [&](const Key& k, int m) { return Key{skel->compose(k[0], m)}; },
      [&](const Key& k, int s) {
        return edge_map_label(skel->tree(s), *named, skel->morphism(k[0]).edge_map, inv);
      },
      &keys);
  Presentation p;
  p.kind = Presentation::Kind::SubRepresentable;
  p.tree = named;
  p.tree_index = ti;
  p.iso = iso;
  p.morphism_of.resize(skel->tree_count());
  for (int s = 0; s < skel->tree_count(); ++s) {
    for (const auto& k : keys[s]) p.morphism_of[s].push_back(k[0]);
  }
  x.set_presentation(std::move(p));
  return share(std::move(x));
}

// A face of a tree, by kind and edge (contracted inner edge, chopped vertex,
// or included edge of a corolla).
struct FaceSpec {
  FaceKind kind;
  int edge;

  friend bool operator==(const FaceSpec&, const FaceSpec&) = default;
};

// Faces in the order of `faces(T)`, without building the face trees.
inline std::vector<FaceSpec> face_specs(const Tree& t) {
  std::vector<FaceSpec> out;
  if (t.vertex_count() == 0) return out;
  if (t.vertex_count() == 1) {
    for (int e = 0; e < t.edge_count(); ++e) out.push_back({FaceKind::Edge, e});
    return out;
  }
  for (int e : t.inner_edges()) out.push_back({FaceKind::Inner, e});
  for (int v : t.vertices()) {
    if (outer_removable(t, v)) out.push_back({FaceKind::Outer, v});
  }
  return out;
}

// Colours and vertices (by output edge) of T that a map factoring through
// the face may use.
struct FaceSupport {
  std::vector<char> colours;
  std::vector<char> vertices;
};

inline FaceSupport face_support(const Tree& t, const FaceSpec& f) {
  const int n = t.edge_count();
  FaceSupport s{std::vector<char>(n, 1), std::vector<char>(n, 1)};
  switch (f.kind) {
    case FaceKind::Inner:
      s.colours[f.edge] = 0;
      break;
    case FaceKind::Outer:
      s.vertices[f.edge] = 0;
      if (f.edge == t.root()) {
        int c = -1;
        for (int x : t.children(f.edge)) {
          if (t.is_inner(x)) c = x;
        }
        for (int e = 0; e < n; ++e) s.colours[e] = e == c || t.is_above(e, c) ? 1 : 0;
      } else {
        for (int x : t.children(f.edge)) s.colours[x] = 0;
      }
      break;
    case FaceKind::Edge:
      for (int e = 0; e < n; ++e) s.colours[e] = e == f.edge ? 1 : 0;
      std::fill(s.vertices.begin(), s.vertices.end(), 0);
      break;
  }
  return s;
}

// α: S -> T factors through the face iff its colours and the vertices of its
// vertex images lie in the face's support.
inline bool factors_through(const TreeMorphism& alpha, const FaceSupport& support) {
  for (int e : alpha.edge_map()) {
    if (!support.colours[e]) return false;
  }
  for (int v : alpha.source().vertices()) {
    for (int w : alpha.vertex_image(v).vertices) {
      if (!support.vertices[w]) return false;
    }
  }
  return true;
}

inline FaceSpec face_by_name(const Tree& t, FaceKind kind, std::string_view name) {
  const int e = t.index(name);
  for (const auto& f : face_specs(t)) {
    if (f.kind == kind && f.edge == e) return f;
  }
  switch (kind) {
    case FaceKind::Inner: fail("argument", "'" + std::string(name) + "' is not an inner edge");
    case FaceKind::Outer: fail("argument", "vertex '" + std::string(name) + "' does not admit an outer face");
    case FaceKind::Edge: fail("argument", "'" + std::string(name) + "' is not an edge of a corolla");
  }
  fail("argument", "unknown face");
}

struct SubObject {
  DSetPtr object;
  DendrMap inclusion;
};

// The union of the given faces inside a sub-representable Ω[T] (faces named
// in T's own edge indices).
inline SubObject face_union(const DSetPtr& rep, const std::vector<FaceSpec>& selected) {
  const Presentation& pr = rep->presentation();
  if (pr.kind != Presentation::Kind::SubRepresentable || pr.tree_index < 0) {
    fail("argument", "face unions are taken inside a representable");
  }
  const Skeleton& sk = rep->skeleton();
  const Tree& st = sk.tree(pr.tree_index);
  std::vector<FaceSupport> supports;
  for (const auto& f : selected) supports.push_back(face_support(st, {f.kind, pr.iso[f.edge]}));
  std::vector<std::vector<Id>> incl;
  auto sub = rep->sub(
      [&](int s, Id x) {
        TreeMorphism alpha = sk.as_morphism(pr.morphism_of[s][x]);
        for (const auto& sup : supports) {
          if (factors_through(alpha, sup)) return true;
        }
        return false;
      },
      &incl);
  Presentation p = pr;
  for (int s = 0; s < sk.tree_count(); ++s) {
    std::vector<int> ms;
    for (Id x : incl[s]) ms.push_back(pr.morphism_of[s][x]);
    p.morphism_of[s] = std::move(ms);
  }
  sub.set_presentation(std::move(p));
  auto obj = share(std::move(sub));
  return {obj, DendrMap{obj, rep, std::move(incl)}};
}

inline SubObject boundary(const DSetPtr& rep) {
  return face_union(rep, face_specs(*rep->presentation().tree));
}

inline SubObject horn_omitting(const DSetPtr& rep, const FaceSpec& omitted) {
  std::vector<FaceSpec> rest;
  for (const auto& f : face_specs(*rep->presentation().tree)) {
    if (!(f == omitted)) rest.push_back(f);
  }
  return face_union(rep, rest);
}

inline SubObject inner_horn(const DSetPtr& rep, std::string_view edge) {
  const Tree& t = *rep->presentation().tree;
  return horn_omitting(rep, face_by_name(t, FaceKind::Inner, edge));
}

inline SubObject outer_horn(const DSetPtr& rep, std::string_view vertex) {
  const Tree& t = *rep->presentation().tree;
  if (t.vertex_count() < 2) fail("argument", "outer horns need a tree with at least two vertices");
  return horn_omitting(rep, face_by_name(t, FaceKind::Outer, vertex));
}

// ---------------------------------------------------------------------------
// Nerves and the simplicial embedding

inline DSetPtr nerve(const OperadPtr& p, const SkeletonPtr& skel) {
  std::unordered_map<int, TreeMorphism> cache;
  auto x = DendroidalSet::tabulate(
      skel,
      [&](int t) {
        std::vector<Key> out;
        for (const auto& m : enumerate_operad_maps(skel->tree(t), *p)) out.push_back(encode(m));
        return out;
      },
      [&](const Key& k, int m) {
        auto it = cache.find(m);
        if (it == cache.end()) it = cache.emplace(m, skel->as_morphism(m)).first;
        const auto& tm = it->second;
        return encode(pull_back(tm, *p, decode_operad_map(k, tm.target().edge_count())));
      },
      [&](const Key& k, int t) {
        const Tree& tr = skel->tree(t);
        return describe(tr, *p, decode_operad_map(k, tr.edge_count()));
      });
  return share(std::move(x));
}

// Largest n with L_n inside the skeleton.
inline int linear_bound(const Skeleton& sk) {
  int n = 0;
  while (sk.linear(n + 1) >= 0) ++n;
  return n;
}

// θ: [a] -> [b] of a skeleton morphism between linear trees.
inline std::vector<int> linear_theta(const Skeleton& sk, int m) {
  const auto& r = sk.morphism(m);
  const auto ps = Skeleton::linear_positions(sk.tree(r.source));
  const auto pt = Skeleton::linear_positions(sk.tree(r.target));
  std::vector<int> theta(ps.size());
  for (std::size_t e = 0; e < ps.size(); ++e) theta[ps[e]] = pt[r.edge_map[e]];
  return theta;
}

// i_!(K): K_n on L_n, empty on non-linear trees.
inline DSetPtr simplicial_embed(const SSetPtr& k, const SkeletonPtr& skel) {
  const int need = linear_bound(*skel);
  if (k->dimension() < need) {
    fail("bound", "simplicial set tabulated to degree " + std::to_string(k->dimension()) +
                      " but the tree bound needs degree " + std::to_string(need));
  }
  auto x = DendroidalSet::tabulate(
      skel,
      [&](int t) {
        std::vector<Key> out;
        const Tree& tr = skel->tree(t);
        if (!tr.is_linear()) return out;
        for (Id s = 0; s < k->size(tr.vertex_count()); ++s) out.push_back({static_cast<int>(s)});
        return out;
      },
      [&](const Key& key, int m) {
        const auto theta = linear_theta(*skel, m);
        const int n = skel->tree(skel->morphism(m).target).vertex_count();
        return Key{static_cast<int>(k->act(theta, n, key[0]))};
      },
      [&](const Key& key, int t) { return k->label(skel->tree(t).vertex_count(), key[0]); });
  Presentation p;
  p.kind = Presentation::Kind::Simplicial;
  p.simplicial = k;
  x.set_presentation(std::move(p));
  return share(std::move(x));
}

// i*X: (i*X)_n = X_{L_n} for n up to the linear bound.
inline SimplicialSet restrict(const DendroidalSet& x) {
  const Skeleton& sk = x.skeleton();
  const int dim = linear_bound(sk);
  return SimplicialSet::tabulate(
      dim,
      [&](int n) {
        std::vector<Key> out;
        for (Id e = 0; e < x.size(sk.linear(n)); ++e) out.push_back({static_cast<int>(e)});
        return out;
      },
      [&](const Key& k, int n, int i) {
        std::vector<int> theta;
        for (int j = 0; j <= n; ++j) {
          if (j != i) theta.push_back(j);
        }
        return Key{static_cast<int>(x.act(sk.linear_morphism(theta, n), k[0]))};
      },
      [&](const Key& k, int n, int i) {
        std::vector<int> theta;
        for (int j = 0; j <= n + 1; ++j) theta.push_back(j <= i ? j : j - 1);
        return Key{static_cast<int>(x.act(sk.linear_morphism(theta, n), k[0]))};
      },
      [&](const Key& k, int n) { return x.label(sk.linear(n), k[0]); });
}

// i*(p) between the restrictions.
inline SimplicialMap restrict_map(const DendrMap& p) {
  const Skeleton& sk = p.source->skeleton();
  SimplicialMap out{std::make_shared<const SimplicialSet>(restrict(*p.source)),
                    std::make_shared<const SimplicialSet>(restrict(*p.target)), {}};
  for (int n = 0; n <= linear_bound(sk); ++n) out.maps.push_back(p.maps[sk.linear(n)]);
  return out;
}

// ---------------------------------------------------------------------------
// Coproducts, unions, fibers

inline DSetPtr coproduct(const std::vector<DSetPtr>& parts) {
  if (parts.empty()) fail("argument", "empty coproduct");
  const SkeletonPtr& skel = parts[0]->skeleton_ptr();
  for (const auto& p : parts) {
    if (p->skeleton_ptr() != skel) fail("argument", "coproduct of dendroidal sets over different bounds");
  }
  const int n = skel->tree_count();
  std::vector<std::size_t> sizes(n, 0);
  std::vector<std::vector<std::string>> labels(n);
  std::vector<std::vector<DendroidalSet::Table>> tables(n);
  for (int t = 0; t < n; ++t) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      for (Id x = 0; x < parts[i]->size(t); ++x) labels[t].push_back(std::to_string(i) + ":" + parts[i]->label(t, x));
    }
  }
  for (int t = 0; t < n; ++t) {
    for (int m : skel->generators_into(t)) {
      const int s = skel->morphism(m).source;
      DendroidalSet::Table table;
      std::size_t offset_s = 0;
      for (const auto& p : parts) {
        for (Id x : p->generator_table(m)) table.push_back(static_cast<Id>(x + offset_s));
        offset_s += p->size(s);
      }
      tables[t].push_back(std::move(table));
    }
    for (const auto& p : parts) sizes[t] += p->size(t);
  }
  DendroidalSet x(skel, std::move(sizes), std::move(tables), std::move(labels));
  Presentation pr;
  pr.kind = Presentation::Kind::Coproduct;
  pr.parts = parts;
  x.set_presentation(std::move(pr));
  return share(std::move(x));
}

// Component index and local id of a coproduct element.
inline std::pair<int, Id> coproduct_part(const DendroidalSet& x, int t, Id e) {
  const auto& parts = x.presentation().parts;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (e < parts[i]->size(t)) return {static_cast<int>(i), e};
    e -= static_cast<Id>(parts[i]->size(t));
  }
  fail("internal", "coproduct element out of range");
}

inline SubObject union_in(const DendrMap& a, const DendrMap& b) {
  if (a.target != b.target) fail("argument", "union of subobjects of different ambients");
  if (!is_injective(a) || !is_injective(b)) fail("argument", "union of maps that are not monomorphisms");
  const auto& z = a.target;
  std::vector<std::vector<char>> in(z->tree_count());
  for (int t = 0; t < z->tree_count(); ++t) {
    in[t].assign(z->size(t), 0);
    for (Id y : a.maps[t]) in[t][y] = 1;
    for (Id y : b.maps[t]) in[t][y] = 1;
  }
  std::vector<std::vector<Id>> incl;
  auto obj = share(z->sub([&](int t, Id y) { return in[t][y] != 0; }, &incl));
  return {obj, DendrMap{obj, z, std::move(incl)}};
}

// The unique morphism L_n -> η of the skeleton.
inline int collapse_to_eta(const Skeleton& sk, int n) {
  std::vector<int> theta(n + 1, 0);
  return sk.linear_morphism(theta, 0);
}

// i* of the pullback of p: X -> S along the colour c ∈ S_η.
inline SimplicialSet fiber(const DendrMap& p, Id c) {
  const Skeleton& sk = p.source->skeleton();
  const int eta = sk.linear(0);
  if (c >= p.target->size(eta)) fail("argument", "colour out of range");
  SimplicialSet full = restrict(*p.source);
  std::vector<Id> over(linear_bound(sk) + 1);
  for (int n = 0; n < static_cast<int>(over.size()); ++n) over[n] = p.target->act(collapse_to_eta(sk, n), c);
  return SimplicialSet::tabulate(
      full.dimension(),
      [&](int n) {
        std::vector<Key> out;
        for (Id x = 0; x < full.size(n); ++x) {
          if (p(sk.linear(n), x) == over[n]) out.push_back({static_cast<int>(x)});
        }
        return out;
      },
      [&](const Key& k, int n, int i) { return Key{static_cast<int>(full.face(n, i, k[0]))}; },
      [&](const Key& k, int n, int i) { return Key{static_cast<int>(full.degen(n, i, k[0]))}; },
      [&](const Key& k, int n) { return full.label(n, k[0]); });
}

// ---------------------------------------------------------------------------
// Maps between dendroidal sets: backtracking search with propagation along
// generators.

class MapSearch {
 public:
  MapSearch(DSetPtr source, DSetPtr target) : b_(std::move(source)), x_(std::move(target)) {
    if (b_->skeleton_ptr() != x_->skeleton_ptr()) fail("argument", "dendroidal sets over different bounds");
    const Skeleton& sk = b_->skeleton();
    h_.resize(sk.tree_count());
    for (int t = 0; t < sk.tree_count(); ++t) h_[t].assign(b_->size(t), kFree);
    for (int t = 0; t < sk.tree_count(); ++t) {
      for (Id y = 0; y < b_->size(t); ++y) {
        if (!b_->is_degenerate(t, y)) order_.push_back({t, y});
      }
    }
    std::stable_sort(order_.begin(), order_.end(), [&](auto a, auto c) {
      const Tree &ta = sk.tree(a.first), &tc = sk.tree(c.first);
      if (ta.vertex_count() != tc.vertex_count()) return ta.vertex_count() > tc.vertex_count();
      return ta.edge_count() > tc.edge_count();
    });
  }

  // Restrict to maps over a base: p∘h = b.
  void over(const DendrMap& source_to_base, const DendrMap& target_to_base) {
    if (source_to_base.source != b_ || target_to_base.source != x_ ||
        source_to_base.target != target_to_base.target) {
      fail("argument", "maps over different bases");
    }
    base_b_ = source_to_base.maps;
    if (!has_base_ || base_p_ != target_to_base.maps) {
      buckets_.assign(h_.size(), {});
      for (int t = 0; t < static_cast<int>(h_.size()); ++t) {
        for (Id x = 0; x < x_->size(t); ++x) buckets_[t][target_to_base(t, x)].push_back(x);
      }
      base_p_ = target_to_base.maps;
    }
    has_base_ = true;
  }

  // Prescribe h∘i = f for a map i: A -> source and f: A -> target.
  void prescribe(const DendrMap& i, const DendrMap& f) {
    if (i.target != b_ || f.target != x_ || i.source != f.source) fail("argument", "prescription does not match");
    for (int t = 0; t < static_cast<int>(h_.size()); ++t) {
      for (Id a = 0; a < i.source->size(t); ++a) prescribed_.push_back({t, i(t, a), f(t, a)});
    }
  }

  // Calls `visit` on every map; stops early when it returns false. Returns
  // the number of maps visited.
  std::size_t for_each(const std::function<bool(const std::vector<std::vector<Id>>&)>& visit) {
    reset();
    for (const auto& [t, y, x] : prescribed_) {
      if (has_base_ && base_p_[t][x] != base_b_[t][y]) return 0;
      if (!assign(t, y, x)) return 0;
    }
    std::size_t count = 0;
    bool stop = false;
    std::vector<std::vector<Id>> out(h_.size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      while (i < order_.size() && h_[order_[i].first][order_[i].second] != kFree) ++i;
      if (i == order_.size()) {
        for (std::size_t t = 0; t < h_.size(); ++t) {
          out[t].resize(h_[t].size());
          for (std::size_t y = 0; y < h_[t].size(); ++y) {
            if (h_[t][y] == kFree) fail("internal", "map search left an element unassigned");
            out[t][y] = static_cast<Id>(h_[t][y]);
          }
        }
        ++count;
        if (!visit(out)) stop = true;
        return;
      }
      const auto [t, y] = order_[i];
      auto try_value = [&](Id x) {
        const std::size_t mark = trail_.size();
        if (assign(t, y, x)) rec(i + 1);
        undo(mark);
      };
      if (has_base_) {
        auto it = buckets_[t].find(base_b_[t][y]);
        if (it == buckets_[t].end()) return;
        for (Id x : it->second) {
          if (stop) return;
          try_value(x);
        }
      } else {
        for (Id x = 0; x < x_->size(t) && !stop; ++x) try_value(x);
      }
    };
    rec(0);
    return count;
  }

  std::optional<DendrMap> first() {
    std::optional<DendrMap> found;
    for_each([&](const auto& m) {
      found = DendrMap{b_, x_, m};
      return false;
    });
    return found;
  }

  std::vector<DendrMap> all(std::size_t limit = 1000000) {
    std::vector<DendrMap> out;
    for_each([&](const auto& m) {
      out.push_back(DendrMap{b_, x_, m});
      if (out.size() >= limit) fail("bound", "more than " + std::to_string(limit) + " maps");
      return true;
    });
    return out;
  }

 private:
  static constexpr std::int64_t kFree = -1;

  void reset() {
    for (auto& v : h_) std::fill(v.begin(), v.end(), kFree);
    trail_.clear();
  }

  bool assign(int t, Id y, Id x) {
    if (h_[t][y] != kFree) return h_[t][y] == x;
    const Skeleton& sk = b_->skeleton();
    std::vector<std::tuple<int, Id, Id>> queue{{t, y, x}};
    h_[t][y] = x;
    trail_.push_back({t, y});
    while (!queue.empty()) {
      auto [u, yy, xx] = queue.back();
      queue.pop_back();
      for (int g : sk.generators_into(u)) {
        const int s = sk.morphism(g).source;
        const Id y2 = b_->act_generator(g, yy);
        const Id x2 = x_->act_generator(g, xx);
        if (h_[s][y2] == kFree) {
          h_[s][y2] = x2;
          trail_.push_back({s, y2});
          queue.push_back({s, y2, x2});
        } else if (h_[s][y2] != x2) {
          return false;
        }
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      auto [t, y] = trail_.back();
      h_[t][y] = kFree;
      trail_.pop_back();
    }
  }

  DSetPtr b_, x_;
  std::vector<std::vector<std::int64_t>> h_;
  std::vector<std::pair<int, Id>> order_;
  std::vector<std::pair<int, Id>> trail_;
  std::vector<std::tuple<int, Id, Id>> prescribed_;
  bool has_base_ = false;
  std::vector<std::vector<Id>> base_b_, base_p_;
  std::vector<std::unordered_map<Id, std::vector<Id>>> buckets_;
};

// The unique map X -> Y; fails when there is none or more than one.
inline DendrMap unique_map(const DSetPtr& x, const DSetPtr& y) {
  MapSearch search(x, y);
  std::optional<DendrMap> found;
  std::size_t n = 0;
  search.for_each([&](const auto& m) {
    if (++n == 1) found = DendrMap{x, y, m};
    return n < 2;
  });
  if (n == 0) fail("argument", "no map exists between the given dendroidal sets");
  if (n > 1) fail("argument", "the map between the given dendroidal sets is not unique");
  return *found;
}

inline DendrMap empty_map(const DSetPtr& empty, const DSetPtr& y) {
  for (int t = 0; t < empty->tree_count(); ++t) {
    if (empty->size(t)) fail("argument", "source is not empty");
  }
  return DendrMap{empty, y, std::vector<std::vector<Id>>(empty->tree_count())};
}

inline DSetPtr empty_set(const SkeletonPtr& skel) {
  const int n = skel->tree_count();
  std::vector<std::vector<DendroidalSet::Table>> tables(n);
  for (int t = 0; t < n; ++t) tables[t].resize(skel->generators_into(t).size());
  return share(DendroidalSet(skel, std::vector<std::size_t>(n, 0), std::move(tables),
                             std::vector<std::vector<std::string>>(n)));
}

// ---------------------------------------------------------------------------
// Normal monomorphisms

struct NormalityWitness {
  int tree;          // skeleton index
  Id element;        // in the target
  int automorphism;  // skeleton morphism fixing the element
};

// Pass (nullopt) iff every element outside the image has a trivial
// Aut-stabilizer.
inline std::optional<NormalityWitness> is_normal_mono(const DendrMap& f) {
  if (!is_injective(f)) fail("argument", "map is not a monomorphism");
  const DendroidalSet& y = *f.target;
  const Skeleton& sk = y.skeleton();
  for (int t = 0; t < sk.tree_count(); ++t) {
    const auto autos = sk.automorphisms(t);
    if (autos.size() == 1) continue;
    std::vector<char> in_image(y.size(t), 0);
    for (Id x : f.maps[t]) in_image[x] = 1;
    for (Id e = 0; e < y.size(t); ++e) {
      if (in_image[e]) continue;
      for (int a : autos) {
        if (a != sk.identity(t) && y.act(a, e) == e) return NormalityWitness{t, e, a};
      }
    }
  }
  return std::nullopt;
}

}  // namespace dendro
