#pragma once

// Finite rooted trees: the objects of the tree category.
//
// A tree is stored as a list of named edges in preorder (the root edge is
// index 0). An edge either carries a vertex on top of it (possibly with zero
// inputs, a nullary vertex) or is a leaf. Vertices are addressed by their
// output edge throughout the library.

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dendro/error.hpp"

namespace dendro {

// Recursive presentation of a tree, used for construction and rewriting.
struct TreeNode {
  std::string name;
  bool vertex = false;
  std::vector<TreeNode> children;
};

class Tree {
 public:
  Tree() : Tree(TreeNode{"e", false, {}}) {}

  explicit Tree(const TreeNode& root) {
    flatten(root, -1);
    std::unordered_map<std::string_view, int> seen;
    for (int e = 0; e < edge_count(); ++e) {
      if (!seen.emplace(names_[e], e).second) {
        fail("duplicate", "duplicate edge name '" + names_[e] + "'");
      }
    }
  }

  int edge_count() const { return static_cast<int>(names_.size()); }
  int vertex_count() const {
    return static_cast<int>(std::count(has_vertex_.begin(), has_vertex_.end(), 1));
  }
  int root() const { return 0; }

  const std::string& name(int e) const { return names_[e]; }
  int parent(int e) const { return parent_[e]; }
  bool has_vertex(int e) const { return has_vertex_[e] != 0; }
  std::span<const int> children(int e) const { return children_[e]; }
  int arity(int v) const { return static_cast<int>(children_[v].size()); }

  bool is_leaf(int e) const { return !has_vertex(e); }
  bool is_inner(int e) const { return has_vertex(e) && parent_[e] >= 0; }

  int find(std::string_view n) const {
    for (int e = 0; e < edge_count(); ++e) {
      if (names_[e] == n) return e;
    }
    return -1;
  }
  int index(std::string_view n) const {
    int e = find(n);
    if (e < 0) fail("argument", "unknown edge '" + std::string(n) + "'");
    return e;
  }

  std::vector<int> leaves() const { return select([&](int e) { return is_leaf(e); }); }
  std::vector<int> inner_edges() const { return select([&](int e) { return is_inner(e); }); }
  std::vector<int> vertices() const { return select([&](int e) { return has_vertex(e); }); }

  // True when `a` lies in the subtree above `b` (including a == b).
  bool is_above(int a, int b) const {
    for (int e = a; e >= 0; e = parent_[e]) {
      if (e == b) return true;
    }
    return false;
  }

  // Linear trees (every vertex unary, at least the root edge) and η count.
  bool is_linear() const {
    for (int e = 0; e < edge_count(); ++e) {
      if (has_vertex(e) && arity(e) != 1) return false;
    }
    return true;
  }
  bool is_corolla() const { return vertex_count() == 1; }

  TreeNode node(int e) const {
    TreeNode n{names_[e], has_vertex(e), {}};
    for (int c : children_[e]) n.children.push_back(node(c));
    return n;
  }
  TreeNode node() const { return node(0); }

  std::string to_string(int e = 0) const {
    std::string out = names_[e];
    if (has_vertex(e)) {
      out += '(';
      bool first = true;
      for (int c : children_[e]) {
        if (!first) out += ',';
        first = false;
        out += to_string(c);
      }
      out += ')';
    }
    return out;
  }

  // Shape code of the subtree above `e`, independent of names and of the
  // stored child order.
  std::string code(int e = 0) const {
    if (!has_vertex(e)) return "|";
    std::vector<std::string> parts;
    for (int c : children_[e]) parts.push_back(code(c));
    std::sort(parts.begin(), parts.end());
    std::string out = "(";
    for (auto& p : parts) out += p;
    out += ')';
    return out;
  }

  // Name-sensitive equality; child order is ignored.
  friend bool operator==(const Tree& a, const Tree& b) {
    if (a.edge_count() != b.edge_count()) return false;
    for (int e = 0; e < a.edge_count(); ++e) {
      int f = b.find(a.names_[e]);
      if (f < 0 || a.has_vertex(e) != b.has_vertex(f)) return false;
      int pa = a.parent_[e], pb = b.parent_[f];
      if ((pa < 0) != (pb < 0)) return false;
      if (pa >= 0 && a.names_[pa] != b.names_[pb]) return false;
    }
    return true;
  }

 private:
  template <class Pred>
  std::vector<int> select(Pred pred) const {
    std::vector<int> out;
    for (int e = 0; e < edge_count(); ++e) {
      if (pred(e)) out.push_back(e);
    }
    return out;
  }

  int flatten(const TreeNode& n, int parent) {
    if (n.name.empty()) fail("syntax", "empty edge name");
    if (!n.vertex && !n.children.empty()) fail("argument", "leaf with children");
    int id = edge_count();
    names_.push_back(n.name);
    parent_.push_back(parent);
    has_vertex_.push_back(n.vertex ? 1 : 0);
    children_.emplace_back();
    for (const auto& c : n.children) {
      int cid = flatten(c, id);
      children_[id].push_back(cid);
    }
    return id;
  }

  std::vector<std::string> names_;
  std::vector<int> parent_;
  std::vector<char> has_vertex_;
  std::vector<std::vector<int>> children_;
};

using TreePtr = std::shared_ptr<const Tree>;

inline TreePtr share(Tree t) { return std::make_shared<const Tree>(std::move(t)); }

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class TreeParser {
 public:
  explicit TreeParser(std::string_view text) : text_(text) {}

  TreeNode parse_all() {
    TreeNode n = parse_edge();
    skip_ws();
    if (pos_ != text_.size()) error("unexpected trailing input");
    return n;
  }

  TreeNode parse_edge() {
    TreeNode n;
    n.name = parse_name();
    skip_ws();
    if (peek() == '(') {
      ++pos_;
      n.vertex = true;
      skip_ws();
      if (peek() != ')') {
        n.children.push_back(parse_edge());
        skip_ws();
        while (peek() == ',') {
          ++pos_;
          n.children.push_back(parse_edge());
          skip_ws();
        }
      }
      if (peek() != ')') error("expected ')' or ','");
      ++pos_;
    }
    return n;
  }

  std::size_t position() const { return pos_; }

 private:
  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  std::string parse_name() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
    if (start == pos_) error("expected edge name");
    return std::string(text_.substr(start, pos_ - start));
  }
  [[noreturn]] void error(const std::string& msg) const {
    fail("syntax", "tree syntax error at position " + std::to_string(pos_) + ": " + msg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Tree parse_tree(std::string_view text) {
  return Tree(detail::TreeParser(text).parse_all());
}

inline std::string serialize(const Tree& t) { return t.to_string(); }

// ---------------------------------------------------------------------------
// Standard shapes

inline Tree eta(std::string name = "e0") { return Tree(TreeNode{std::move(name), false, {}}); }

// C_n with root "r" and leaves "l1".."ln".
inline Tree corolla(int n) {
  TreeNode root{"r", true, {}};
  for (int i = 1; i <= n; ++i) root.children.push_back({"l" + std::to_string(i), false, {}});
  return Tree(root);
}

// L_n with edges "0".."n"; "0" is the leaf and "n" the root, matching [n].
inline Tree linear_tree(int n) {
  TreeNode cur{"0", false, {}};
  for (int i = 1; i <= n; ++i) cur = TreeNode{std::to_string(i), true, {cur}};
  return Tree(cur);
}

// ---------------------------------------------------------------------------
// Statistics

struct TreeStats {
  int vertices = 0;
  int edges = 0;
  std::set<std::string> inner;
  std::set<std::string> leaves;
  std::string root;
};

inline TreeStats tree_stats(const Tree& t) {
  TreeStats s;
  s.vertices = t.vertex_count();
  s.edges = t.edge_count();
  for (int e : t.inner_edges()) s.inner.insert(t.name(e));
  for (int e : t.leaves()) s.leaves.insert(t.name(e));
  s.root = t.name(t.root());
  return s;
}

// ---------------------------------------------------------------------------
// Isomorphisms

struct TreeIso {
  Tree source;
  Tree target;
  std::vector<int> edge_map;  // source edge -> target edge
};

namespace detail {

// Calls `emit` once per isomorphism between a/ea and b/eb extending `map`.
inline void for_each_iso(const Tree& a, int ea, const Tree& b, int eb, std::vector<int>& map,
                         const std::function<void()>& emit);

inline void match_children(const Tree& a, std::span<const int> ca, const Tree& b,
                           std::span<const int> cb, std::size_t i, std::vector<char>& used,
                           const std::vector<std::string>& codes_a,
                           const std::vector<std::string>& codes_b, std::vector<int>& map,
                           const std::function<void()>& emit) {
  if (i == ca.size()) {
    emit();
    return;
  }
  for (std::size_t j = 0; j < cb.size(); ++j) {
    if (used[j] || codes_a[i] != codes_b[j]) continue;
    used[j] = 1;
    for_each_iso(a, ca[i], b, cb[j], map, [&] {
      match_children(a, ca, b, cb, i + 1, used, codes_a, codes_b, map, emit);
    });
    used[j] = 0;
  }
}

inline void for_each_iso(const Tree& a, int ea, const Tree& b, int eb, std::vector<int>& map,
                         const std::function<void()>& emit) {
  if (a.has_vertex(ea) != b.has_vertex(eb) || a.arity(ea) != b.arity(eb)) return;
  map[ea] = eb;
  if (!a.has_vertex(ea) || a.arity(ea) == 0) {
    emit();
    return;
  }
  auto ca = a.children(ea);
  auto cb = b.children(eb);
  std::vector<std::string> codes_a, codes_b;
  for (int c : ca) codes_a.push_back(a.code(c));
  for (int c : cb) codes_b.push_back(b.code(c));
  std::vector<char> used(cb.size(), 0);
  match_children(a, ca, b, cb, 0, used, codes_a, codes_b, map, emit);
}

}  // namespace detail

// All edge bijections a -> b preserving root, leaves and vertex incidence.
inline std::vector<std::vector<int>> isomorphisms(const Tree& a, const Tree& b) {
  std::vector<std::vector<int>> out;
  if (a.edge_count() != b.edge_count() || a.code() != b.code()) return out;
  std::vector<int> map(a.edge_count(), -1);
  detail::for_each_iso(a, a.root(), b, b.root(), map, [&] { out.push_back(map); });
  return out;
}

inline bool isomorphic(const Tree& a, const Tree& b) { return a.code() == b.code(); }

inline std::vector<TreeIso> automorphisms(const Tree& t) {
  std::vector<TreeIso> out;
  for (auto& m : isomorphisms(t, t)) out.push_back({t, t, std::move(m)});
  return out;
}

// ---------------------------------------------------------------------------
// Canonical form

namespace detail {

inline TreeNode canonical_node(const Tree& t, int e, int& counter, std::vector<int>& map) {
  int id = counter++;
  map[e] = id;
  TreeNode n{"e" + std::to_string(id), t.has_vertex(e), {}};
  std::vector<int> kids(t.children(e).begin(), t.children(e).end());
  std::stable_sort(kids.begin(), kids.end(),
                   [&](int x, int y) { return t.code(x) < t.code(y); });
  for (int c : kids) n.children.push_back(canonical_node(t, c, counter, map));
  return n;
}

inline TreeNode node_from_code(std::string_view code, std::size_t& pos, int& counter) {
  TreeNode n{"e" + std::to_string(counter++), false, {}};
  if (code[pos] == '|') {
    ++pos;
    return n;
  }
  n.vertex = true;
  ++pos;  // '('
  while (code[pos] != ')') n.children.push_back(node_from_code(code, pos, counter));
  ++pos;
  return n;
}

}  // namespace detail

// The canonical representative of the iso class of `t` (edges e0, e1, ... in
// preorder of code-sorted children) together with an iso t -> canonical.
struct Canonical {
  Tree tree;
  std::vector<int> iso;
};

inline Canonical canonicalize(const Tree& t) {
  int counter = 0;
  std::vector<int> map(t.edge_count(), -1);
  TreeNode n = detail::canonical_node(t, t.root(), counter, map);
  return {Tree(n), std::move(map)};
}

inline Tree tree_from_code(std::string_view code) {
  std::size_t pos = 0;
  int counter = 0;
  return Tree(detail::node_from_code(code, pos, counter));
}

// ---------------------------------------------------------------------------
// Subtrees and grafting

inline Tree subtree_above(const Tree& t, std::string_view edge) {
  return Tree(t.node(t.index(edge)));
}

struct GraftResult {
  Tree tree;
  std::set<std::string> new_inner;
};

inline GraftResult graft(const Tree& base, const std::map<std::string, Tree>& assignment) {
  std::set<std::string> names;
  for (int e = 0; e < base.edge_count(); ++e) names.insert(base.name(e));
  std::set<std::string> new_inner;
  for (const auto& [leaf, piece] : assignment) {
    int e = base.find(leaf);
    if (e < 0) fail("argument", "graft onto unknown edge '" + leaf + "'");
    if (!base.is_leaf(e)) fail("argument", "graft onto non-leaf '" + leaf + "'");
    if (piece.name(piece.root()) != leaf) {
      fail("argument", "grafted tree root '" + piece.name(piece.root()) +
                           "' does not match leaf '" + leaf + "'");
    }
    for (int f = 1; f < piece.edge_count(); ++f) {
      if (!names.insert(piece.name(f)).second) {
        fail("duplicate", "name collision on '" + piece.name(f) + "'");
      }
    }
    if (piece.vertex_count() > 0) new_inner.insert(leaf);
  }
  std::function<TreeNode(int)> build = [&](int e) -> TreeNode {
    auto it = assignment.find(base.name(e));
    if (it != assignment.end()) return it->second.node();
    TreeNode n{base.name(e), base.has_vertex(e), {}};
    for (int c : base.children(e)) n.children.push_back(build(c));
    return n;
  };
  return {Tree(build(base.root())), std::move(new_inner)};
}

// ---------------------------------------------------------------------------
// Enumeration of iso classes

inline constexpr int kEnumerationCap = 7;

// Shape codes of all trees with exactly `v` vertices and arity <= max_arity,
// sorted.
inline std::vector<std::vector<std::string>> codes_by_vertex_count(int max_vertices,
                                                                   int max_arity) {
  std::vector<std::vector<std::string>> by(max_vertices + 1);
  by[0] = {"|"};
  for (int k = 1; k <= max_vertices; ++k) {
    // Pool of candidate children: every code with fewer than k vertices.
    std::vector<std::pair<std::string, int>> pool;
    for (int j = 0; j < k; ++j) {
      for (auto& c : by[j]) pool.emplace_back(c, j);
    }
    std::sort(pool.begin(), pool.end());
    std::set<std::string> out;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t, int)> rec = [&](std::size_t from, int budget) {
      if (budget == 0) {
        std::string code = "(";
        for (auto i : pick) code += pool[i].first;
        code += ')';
        out.insert(code);
      }
      if (static_cast<int>(pick.size()) == max_arity) return;
      for (std::size_t i = from; i < pool.size(); ++i) {
        if (pool[i].second > budget) continue;
        pick.push_back(i);
        rec(i, budget - pool[i].second);
        pick.pop_back();
      }
    };
    rec(0, k - 1);
    by[k].assign(out.begin(), out.end());
  }
  return by;
}

// One canonical representative per iso class with <= max_vertices vertices,
// ordered by (vertex count, edge count, shape code).
inline std::vector<Tree> enumerate_trees(int max_vertices, int max_arity = 3) {
  if (max_vertices < 0 || max_arity < 0) fail("argument", "negative enumeration bound");
  if (max_vertices > kEnumerationCap) {
    fail("bound", "max_vertices " + std::to_string(max_vertices) + " exceeds enumeration cap " +
                      std::to_string(kEnumerationCap));
  }
  auto by = codes_by_vertex_count(max_vertices, max_arity);
  std::vector<Tree> out;
  for (auto& codes : by) {
    std::vector<Tree> level;
    for (auto& c : codes) level.push_back(tree_from_code(c));
    std::stable_sort(level.begin(), level.end(), [](const Tree& a, const Tree& b) {
      if (a.edge_count() != b.edge_count()) return a.edge_count() < b.edge_count();
      return a.code() < b.code();
    });
    for (auto& t : level) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace dendro
