#pragma once

// The dendroidal-set expression language of the command line:
//
//   expr  := rep(tree) | eta | boundary(tree) | ihorn(tree,NAME) | ohorn(tree,NAME)
//          | nerve(opname) | i!(sexpr) | coprod(expr,expr) | tensor(expr,int)
//   sexpr := simplex(int) | shorn(int,int) | sboundary(int)

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dendro/dset.hpp"
#include "dendro/error.hpp"
#include "dendro/fibcheck.hpp"
#include "dendro/operad.hpp"
#include "dendro/skeleton.hpp"
#include "dendro/sset.hpp"
#include "dendro/tensor.hpp"
#include "dendro/tree.hpp"

namespace dendro {

struct Expr {
  enum class Kind { Rep, Eta, Boundary, InnerHorn, OuterHorn, Nerve, Embed, Coprod, Tensor };
  enum class SKind { Simplex, Horn, Boundary };

  Kind kind = Kind::Eta;
  std::optional<Tree> tree;
  std::string name;  // horn face or operad name
  SKind skind = SKind::Simplex;
  int n = 0;
  int k = 0;
  std::vector<Expr> children;
};

namespace detail {

inline std::string_view trim_ws(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits "head(a,b,...)" into the head and top-level arguments.
inline std::pair<std::string, std::vector<std::string>> split_call(std::string_view text) {
  text = trim_ws(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos) return {std::string(text), {}};
  if (text.back() != ')') fail("syntax", "expected ')' at the end of '" + std::string(text) + "'");
  std::string head(trim_ws(text.substr(0, open)));
  std::string_view inside = text.substr(open + 1, text.size() - open - 2);
  std::vector<std::string> args;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < inside.size(); ++i) {
    const char c = inside[i];
    if (c == '(') ++depth;
    if (c == ')' && --depth < 0) fail("syntax", "unbalanced parentheses in '" + std::string(text) + "'");
    if (c == ',' && depth == 0) {
      args.emplace_back(trim_ws(inside.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) fail("syntax", "unbalanced parentheses in '" + std::string(text) + "'");
  args.emplace_back(trim_ws(inside.substr(start)));
  if (args.size() == 1 && args[0].empty()) args.clear();
  return {head, args};
}

inline int parse_int(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    fail("syntax", "expected a non-negative integer, got '" + s + "'");
  }
  if (s.size() > 3) fail("bound", "integer '" + s + "' is too large");
  return std::stoi(s);
}

inline void expect_args(const std::string& head, const std::vector<std::string>& args, std::size_t n) {
  if (args.size() != n) {
    fail("syntax", "'" + head + "' takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"));
  }
}

}  // namespace detail

inline Expr parse_expr(std::string_view text) {
  auto [head, args] = detail::split_call(text);
  Expr e;
  using K = Expr::Kind;
  if (head == "eta") {
    if (!args.empty() || detail::trim_ws(text) != "eta") fail("syntax", "'eta' takes no arguments");
    e.kind = K::Eta;
  } else if (head == "rep" || head == "boundary") {
    detail::expect_args(head, args, 1);
    e.kind = head == "rep" ? K::Rep : K::Boundary;
    e.tree = parse_tree(args[0]);
  } else if (head == "ihorn" || head == "ohorn") {
    detail::expect_args(head, args, 2);
    e.kind = head == "ihorn" ? K::InnerHorn : K::OuterHorn;
    e.tree = parse_tree(args[0]);
    e.name = args[1];
    e.tree->index(e.name);
  } else if (head == "nerve") {
    detail::expect_args(head, args, 1);
    e.kind = K::Nerve;
    e.name = args[0];
    operad_by_name(e.name);
  } else if (head == "i!") {
    detail::expect_args(head, args, 1);
    e.kind = K::Embed;
    auto [shead, sargs] = detail::split_call(args[0]);
    if (shead == "simplex") {
      detail::expect_args(shead, sargs, 1);
      e.skind = Expr::SKind::Simplex;
    } else if (shead == "shorn") {
      detail::expect_args(shead, sargs, 2);
      e.skind = Expr::SKind::Horn;
      e.k = detail::parse_int(sargs[1]);
    } else if (shead == "sboundary") {
      detail::expect_args(shead, sargs, 1);
      e.skind = Expr::SKind::Boundary;
    } else {
      fail("syntax", "unknown simplicial expression '" + shead + "'");
    }
    e.n = detail::parse_int(sargs[0]);
    check_simplicial_bound(e.n);
    if (e.skind == Expr::SKind::Horn && e.k > e.n) fail("argument", "horn index out of range");
  } else if (head == "coprod") {
    detail::expect_args(head, args, 2);
    e.kind = K::Coprod;
    e.children = {parse_expr(args[0]), parse_expr(args[1])};
  } else if (head == "tensor") {
    detail::expect_args(head, args, 2);
    e.kind = K::Tensor;
    e.children = {parse_expr(args[0])};
    e.n = detail::parse_int(args[1]);
    check_simplicial_bound(e.n);
  } else {
    fail("syntax", "unknown expression '" + head + "'");
  }
  return e;
}

inline std::string to_string(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Eta: return "eta";
    case K::Rep: return "rep(" + serialize(*e.tree) + ")";
    case K::Boundary: return "boundary(" + serialize(*e.tree) + ")";
    case K::InnerHorn: return "ihorn(" + serialize(*e.tree) + "," + e.name + ")";
    case K::OuterHorn: return "ohorn(" + serialize(*e.tree) + "," + e.name + ")";
    case K::Nerve: return "nerve(" + e.name + ")";
    case K::Embed:
      switch (e.skind) {
        case Expr::SKind::Simplex: return "i!(simplex(" + std::to_string(e.n) + "))";
        case Expr::SKind::Horn: return "i!(shorn(" + std::to_string(e.n) + "," + std::to_string(e.k) + "))";
        case Expr::SKind::Boundary: return "i!(sboundary(" + std::to_string(e.n) + "))";
      }
      break;
    case K::Coprod: return "coprod(" + to_string(e.children[0]) + "," + to_string(e.children[1]) + ")";
    case K::Tensor: return "tensor(" + to_string(e.children[0]) + "," + std::to_string(e.n) + ")";
  }
  fail("internal", "unknown expression kind");
}

// ---------------------------------------------------------------------------
// Evaluation

struct Evaluated {
  Expr expr;
  DSetPtr value;
  // Horns and boundaries: the inclusion into the representable.
  std::optional<DendrMap> inclusion;
  // Tensors: the projection to the tensored expression.
  std::optional<DendrMap> projection;
};

inline SimplicialSet evaluate_simplicial(const Expr& e, int dim) {
  switch (e.skind) {
    case Expr::SKind::Simplex: return standard_simplex(e.n, std::max(dim, e.n));
    case Expr::SKind::Horn: return horn(e.n, e.k, std::max(dim, e.n));
    case Expr::SKind::Boundary: return boundary(e.n, std::max(dim, e.n));
  }
  fail("internal", "unknown simplicial expression");
}

inline Evaluated evaluate(const Expr& e, const SkeletonPtr& skel) {
  using K = Expr::Kind;
  Evaluated out{e, nullptr, std::nullopt, std::nullopt};
  switch (e.kind) {
    case K::Eta: out.value = representable(eta(), skel); break;
    case K::Rep: out.value = representable(*e.tree, skel); break;
    case K::Boundary:
    case K::InnerHorn:
    case K::OuterHorn: {
      auto rep = representable(*e.tree, skel);
      SubObject sub = e.kind == K::Boundary    ? boundary(rep)
                      : e.kind == K::InnerHorn ? inner_horn(rep, e.name)
                                               : outer_horn(rep, e.name);
      out.value = sub.object;
      out.inclusion = sub.inclusion;
      break;
    }
    case K::Nerve: out.value = nerve(operad_by_name(e.name), skel); break;
    case K::Embed: {
      auto k = std::make_shared<const SimplicialSet>(evaluate_simplicial(e, linear_bound(*skel)));
      out.value = simplicial_embed(k, skel);
      break;
    }
    case K::Coprod:
      out.value = coproduct({evaluate(e.children[0], skel).value, evaluate(e.children[1], skel).value});
      break;
    case K::Tensor: {
      auto r = tensor_with_simplex(evaluate(e.children[0], skel).value, e.n);
      out.value = r.result;
      out.projection = r.projection;
      break;
    }
  }
  return out;
}

inline Evaluated evaluate(std::string_view text, const SkeletonPtr& skel) {
  return evaluate(parse_expr(text), skel);
}

// The structure map X -> S named by `--over`: the identity, the inclusion of
// a horn or boundary into its representable, the projection of a tensor, the
// map to the terminal nerve(comm), or else the unique map.
inline DendrMap resolve_over(const Evaluated& x, const Evaluated& s) {
  using K = Expr::Kind;
  const std::string xs = to_string(x.expr), ss = to_string(s.expr);
  if (xs == ss) return identity_map(x.value);
  if (x.inclusion && s.expr.kind == K::Rep && serialize(*x.expr.tree) == serialize(*s.expr.tree)) {
    return DendrMap{x.value, s.value, x.inclusion->maps};
  }
  if (x.projection && to_string(x.expr.children[0]) == ss) {
    return DendrMap{x.value, s.value, x.projection->maps};
  }
  if (s.expr.kind == K::Nerve && s.expr.name == "comm") return to_terminal(x.value, s.value);
  return unique_map(x.value, s.value);
}

}  // namespace dendro
