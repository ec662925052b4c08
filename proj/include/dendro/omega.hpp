#pragma once

// Morphisms of the tree category: maps of the free operads generated by two
// trees. Every free tree operad has at most one operation per signature, so
// a morphism is determined by its edge map; the per-vertex subtree image is
// recovered on demand.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dendro/error.hpp"
#include "dendro/tree.hpp"

namespace dendro {

using Id = std::uint32_t;
using Key = std::vector<int>;

struct VectorHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// An operation of Ω(T): the subtree with the given root and leaves. A unit
// has no vertices and its single leaf equals the root.
struct Subtree {
  int root = 0;
  std::vector<int> leaves;    // sorted
  std::vector<int> vertices;  // output edges, sorted

  bool is_unit() const { return vertices.empty(); }
};

inline std::optional<Subtree> find_subtree(const Tree& t, int root, std::vector<int> leaves) {
  std::sort(leaves.begin(), leaves.end());
  if (std::adjacent_find(leaves.begin(), leaves.end()) != leaves.end()) return std::nullopt;
  Subtree s{root, leaves, {}};
  if (leaves.size() == 1 && leaves[0] == root) return s;
  std::vector<char> is_leaf(t.edge_count(), 0);
  for (int l : leaves) is_leaf[l] = 1;
  if (is_leaf[root]) return std::nullopt;
  std::size_t reached = 0;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int e = stack.back();
    stack.pop_back();
    if (is_leaf[e]) {
      ++reached;
      continue;
    }
    if (!t.has_vertex(e)) return std::nullopt;
    s.vertices.push_back(e);
    for (int c : t.children(e)) stack.push_back(c);
  }
  if (reached != leaves.size()) return std::nullopt;
  std::sort(s.vertices.begin(), s.vertices.end());
  return s;
}

inline std::vector<int> subtree_inner_edges(const Tree& t, const Subtree& s) {
  std::vector<int> out;
  for (int v : s.vertices) {
    for (int c : t.children(v)) {
      if (!std::binary_search(s.leaves.begin(), s.leaves.end(), c)) out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// The subtree as a tree term, e.g. "r(a(x,y),b)".
inline std::string subtree_term(const Tree& t, const Subtree& s) {
  std::function<std::string(int)> rec = [&](int e) {
    std::string out = t.name(e);
    if (std::binary_search(s.leaves.begin(), s.leaves.end(), e)) return out;
    out += '(';
    bool first = true;
    for (int c : t.children(e)) {
      if (!first) out += ',';
      first = false;
      out += rec(c);
    }
    return out + ')';
  };
  return rec(s.root);
}

// Non-unit operations of Ω(T) grouped by root edge.
class TreeOperations {
 public:
  explicit TreeOperations(const Tree& t) : by_root_(t.edge_count()) {
    for (int c = t.edge_count() - 1; c >= 0; --c) {
      if (!t.has_vertex(c)) continue;
      // Each child is either cut (becomes a leaf) or continued by a non-unit
      // subtree rooted at it.
      std::vector<Subtree> acc{Subtree{c, {}, {c}}};
      for (int ch : t.children(c)) {
        std::vector<Subtree> next;
        for (const auto& base : acc) {
          Subtree cut = base;
          cut.leaves.push_back(ch);
          next.push_back(std::move(cut));
          for (const auto& up : by_root_[ch]) {
            Subtree ext = base;
            ext.leaves.insert(ext.leaves.end(), up.leaves.begin(), up.leaves.end());
            ext.vertices.insert(ext.vertices.end(), up.vertices.begin(), up.vertices.end());
            next.push_back(std::move(ext));
          }
        }
        acc = std::move(next);
      }
      for (auto& s : acc) {
        std::sort(s.leaves.begin(), s.leaves.end());
        std::sort(s.vertices.begin(), s.vertices.end());
      }
      by_root_[c] = std::move(acc);
    }
  }

  const std::vector<Subtree>& rooted_at(int c) const { return by_root_[c]; }

 private:
  std::vector<std::vector<Subtree>> by_root_;
};

// ---------------------------------------------------------------------------

class TreeMorphism {
 public:
  TreeMorphism(TreePtr source, TreePtr target, std::vector<int> edge_map)
      : source_(std::move(source)), target_(std::move(target)), edge_map_(std::move(edge_map)) {
    if (static_cast<int>(edge_map_.size()) != source_->edge_count()) {
      fail("argument", "edge map has wrong size");
    }
    for (int x : edge_map_) {
      if (x < 0 || x >= target_->edge_count()) fail("argument", "edge map out of range");
    }
    for (int v : source_->vertices()) {
      if (!vertex_image_opt(v)) {
        fail("argument", "edge map is not an operad map at vertex '" + source_->name(v) + "'");
      }
    }
  }

  static TreeMorphism identity(const TreePtr& t) {
    std::vector<int> m(t->edge_count());
    std::iota(m.begin(), m.end(), 0);
    return TreeMorphism(t, t, std::move(m));
  }

  // Builds the morphism from a name-to-name edge assignment.
  static TreeMorphism by_names(const TreePtr& source, const TreePtr& target) {
    std::vector<int> m(source->edge_count());
    for (int e = 0; e < source->edge_count(); ++e) m[e] = target->index(source->name(e));
    return TreeMorphism(source, target, std::move(m));
  }

  const Tree& source() const { return *source_; }
  const Tree& target() const { return *target_; }
  const TreePtr& source_ptr() const { return source_; }
  const TreePtr& target_ptr() const { return target_; }
  const std::vector<int>& edge_map() const { return edge_map_; }
  int operator()(int e) const { return edge_map_[e]; }

  Subtree vertex_image(int v) const { return *vertex_image_opt(v); }

  bool is_injective() const {
    std::vector<int> m = edge_map_;
    std::sort(m.begin(), m.end());
    return std::adjacent_find(m.begin(), m.end()) == m.end();
  }

  bool is_surjective() const {
    std::vector<char> hit(target_->edge_count(), 0);
    for (int x : edge_map_) hit[x] = 1;
    if (std::count(hit.begin(), hit.end(), 0) != 0) return false;
    std::vector<char> used(target_->edge_count(), 0);
    for (int v : source_->vertices()) {
      for (int w : vertex_image(v).vertices) used[w] = 1;
    }
    for (int w : target_->vertices()) {
      if (!used[w]) return false;
    }
    return true;
  }

  bool is_iso() const { return is_injective() && is_surjective(); }

  friend bool operator==(const TreeMorphism& a, const TreeMorphism& b) {
    return *a.source_ == *b.source_ && *a.target_ == *b.target_ &&
           a.named_map() == b.named_map();
  }

  std::map<std::string, std::string> named_map() const {
    std::map<std::string, std::string> out;
    for (int e = 0; e < source_->edge_count(); ++e) {
      out[source_->name(e)] = target_->name(edge_map_[e]);
    }
    return out;
  }

 private:
  std::optional<Subtree> vertex_image_opt(int v) const {
    std::vector<int> ins;
    for (int c : source_->children(v)) ins.push_back(edge_map_[c]);
    if (ins.size() == 1 && ins[0] == edge_map_[v]) return Subtree{ins[0], ins, {}};
    auto s = find_subtree(*target_, edge_map_[v], ins);
    if (s && s->is_unit()) return std::nullopt;
    return s;
  }

  TreePtr source_;
  TreePtr target_;
  std::vector<int> edge_map_;
};

// g ∘ f. The middle trees must agree strictly (names and structure).
inline TreeMorphism compose(const TreeMorphism& g, const TreeMorphism& f) {
  std::vector<int> m(f.source().edge_count());
  if (f.target_ptr() == g.source_ptr()) {
    for (int e = 0; e < f.source().edge_count(); ++e) m[e] = g(f(e));
  } else {
    if (!(f.target() == g.source())) fail("argument", "compose: boundary mismatch");
    for (int e = 0; e < f.source().edge_count(); ++e) {
      m[e] = g(g.source().index(f.target().name(f(e))));
    }
  }
  return TreeMorphism(f.source_ptr(), g.target_ptr(), std::move(m));
}

// Calls `emit` with every edge map of an operad map Ω(S) -> Ω(T).
// Top-down: root image first, then each vertex's operation in preorder.
inline void for_each_hom(const Tree& s, const Tree& t, const TreeOperations& ops,
                         const std::function<void(const std::vector<int>&)>& emit) {
  std::vector<int> img(s.edge_count(), -1);
  std::vector<int> verts = s.vertices();
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == verts.size()) {
      emit(img);
      return;
    }
    int v = verts[i];
    auto kids = s.children(v);
    const int k = static_cast<int>(kids.size());
    if (k == 1) {
      img[kids[0]] = img[v];
      rec(i + 1);
    }
    for (const auto& op : ops.rooted_at(img[v])) {
      if (static_cast<int>(op.leaves.size()) != k) continue;
      std::vector<int> perm(k);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        for (int j = 0; j < k; ++j) img[kids[j]] = op.leaves[perm[j]];
        rec(i + 1);
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  };
  for (int r = 0; r < t.edge_count(); ++r) {
    img[s.root()] = r;
    rec(0);
  }
}

inline std::vector<TreeMorphism> enumerate_hom(const TreePtr& s, const TreePtr& t) {
  TreeOperations ops(*t);
  std::vector<TreeMorphism> out;
  for_each_hom(*s, *t, ops, [&](const std::vector<int>& m) { out.emplace_back(s, t, m); });
  return out;
}

// ---------------------------------------------------------------------------
// Faces and degeneracies

enum class FaceKind { Inner, Outer, Edge };

inline const char* face_kind_name(FaceKind k) {
  switch (k) {
    case FaceKind::Inner: return "inner";
    case FaceKind::Outer: return "outer";
    case FaceKind::Edge: return "edge";
  }
  return "?";
}

struct Face {
  FaceKind kind;
  std::string edge;  // contracted edge, removed vertex (by output edge) or included edge
  TreeMorphism map;
};

inline int inner_neighbours(const Tree& t, int v) {
  int n = t.is_inner(v) ? 1 : 0;
  for (int c : t.children(v)) n += t.is_inner(c) ? 1 : 0;
  return n;
}

// A vertex admits an outer face when it touches at most one inner edge and
// the tree has at least two vertices.
inline bool outer_removable(const Tree& t, int v) {
  return t.has_vertex(v) && t.vertex_count() >= 2 && inner_neighbours(t, v) <= 1;
}

inline Tree contract_edge(const Tree& t, int e) {
  std::function<TreeNode(int)> build = [&](int x) {
    TreeNode n{t.name(x), t.has_vertex(x), {}};
    for (int c : t.children(x)) {
      if (c == e) {
        for (int g : t.children(c)) n.children.push_back(build(g));
      } else {
        n.children.push_back(build(c));
      }
    }
    return n;
  };
  return Tree(build(t.root()));
}

inline Tree chop_vertex(const Tree& t, int v) {
  if (v == t.root()) {
    for (int c : t.children(v)) {
      if (t.is_inner(c)) return Tree(t.node(c));
    }
    fail("argument", "root vertex has no inner input");
  }
  std::function<TreeNode(int)> build = [&](int x) {
    TreeNode n{t.name(x), t.has_vertex(x) && x != v, {}};
    if (x == v) return n;
    for (int c : t.children(x)) n.children.push_back(build(c));
    return n;
  };
  return Tree(build(t.root()));
}

inline TreeMorphism inner_face(const TreePtr& t, std::string_view edge) {
  int e = t->index(edge);
  if (!t->is_inner(e)) fail("argument", "'" + std::string(edge) + "' is not an inner edge");
  return TreeMorphism::by_names(share(contract_edge(*t, e)), t);
}

inline TreeMorphism outer_face(const TreePtr& t, std::string_view vertex) {
  int v = t->index(vertex);
  if (!outer_removable(*t, v)) {
    fail("argument", "vertex '" + std::string(vertex) + "' does not admit an outer face");
  }
  return TreeMorphism::by_names(share(chop_vertex(*t, v)), t);
}

inline TreeMorphism edge_inclusion(const TreePtr& t, std::string_view edge) {
  t->index(edge);
  return TreeMorphism::by_names(share(eta(std::string(edge))), t);
}

// All faces of T, in a fixed order: inner faces by edge index, outer faces
// by vertex index; a corolla's faces are its edge inclusions.
inline std::vector<Face> faces(const TreePtr& t) {
  std::vector<Face> out;
  if (t->vertex_count() == 0) return out;
  if (t->vertex_count() == 1) {
    for (int e = 0; e < t->edge_count(); ++e) {
      out.push_back({FaceKind::Edge, t->name(e), edge_inclusion(t, t->name(e))});
    }
    return out;
  }
  for (int e : t->inner_edges()) {
    out.push_back({FaceKind::Inner, t->name(e), inner_face(t, t->name(e))});
  }
  for (int v : t->vertices()) {
    if (outer_removable(*t, v)) {
      out.push_back({FaceKind::Outer, t->name(v), outer_face(t, t->name(v))});
    }
  }
  return out;
}

// Collapses the unary vertex on top of `vertex`; the merged edge keeps the
// output name.
inline TreeMorphism degeneracy(const TreePtr& t, std::string_view vertex) {
  int v = t->index(vertex);
  if (!t->has_vertex(v) || t->arity(v) != 1) {
    fail("argument", "vertex '" + std::string(vertex) + "' is not unary");
  }
  int in = t->children(v)[0];
  std::function<TreeNode(int)> build = [&](int x) {
    if (x == v) {
      TreeNode n = build(in);
      n.name = t->name(v);
      return n;
    }
    TreeNode n{t->name(x), t->has_vertex(x), {}};
    for (int c : t->children(x)) n.children.push_back(build(c));
    return n;
  };
  TreePtr target = share(Tree(build(t->root())));
  std::vector<int> m(t->edge_count());
  for (int e = 0; e < t->edge_count(); ++e) {
    m[e] = target->index(e == in ? t->name(v) : t->name(e));
  }
  return TreeMorphism(t, target, std::move(m));
}

// ---------------------------------------------------------------------------
// Classification and factorization

enum class MorphismClass { Iso, Mono, Epi, Mixed };

inline const char* class_name(MorphismClass c) {
  switch (c) {
    case MorphismClass::Iso: return "iso";
    case MorphismClass::Mono: return "face-like mono";
    case MorphismClass::Epi: return "degeneracy-like epi";
    case MorphismClass::Mixed: return "mixed";
  }
  return "?";
}

enum class FactorKind { Degeneracy, Face, Iso };

struct Factor {
  FactorKind kind;
  TreeMorphism map;
};

struct Classification {
  MorphismClass kind;
  std::vector<Factor> factors;  // in order of application
};

inline TreeMorphism compose_all(const TreeMorphism& first, std::span<const Factor> rest) {
  TreeMorphism acc = first;
  for (const auto& f : rest) acc = compose(f.map, acc);
  return acc;
}

inline Classification classify(const TreeMorphism& f) {
  Classification out;
  const bool inj = f.is_injective();
  const bool surj = f.is_surjective();
  out.kind = inj && surj ? MorphismClass::Iso
             : inj       ? MorphismClass::Mono
             : surj      ? MorphismClass::Epi
                         : MorphismClass::Mixed;
  if (f.is_iso() && f.source() == f.target() && f.named_map() == TreeMorphism::identity(f.source_ptr()).named_map()) {
    return out;
  }

  // Degeneracies: collapse unary vertices sent to units.
  TreePtr src = f.source_ptr();
  std::map<std::string, std::string> img = f.named_map();
  for (;;) {
    int hit = -1;
    for (int v : src->vertices()) {
      if (src->arity(v) == 1 && img[src->name(v)] == img[src->name(src->children(v)[0])]) {
        hit = v;
        break;
      }
    }
    if (hit < 0) break;
    TreeMorphism d = degeneracy(src, src->name(hit));
    img.erase(src->name(src->children(hit)[0]));
    out.factors.push_back({FactorKind::Degeneracy, d});
    src = d.target_ptr();
  }

  // Remaining map is injective on edges; locate its image region in T.
  const Tree& t = f.target();
  std::set<std::string> colours;
  for (auto& [from, to] : img) colours.insert(to);
  std::vector<int> mono_map(src->edge_count());
  for (int e = 0; e < src->edge_count(); ++e) mono_map[e] = t.index(img[src->name(e)]);
  TreeMorphism mono(src, f.target_ptr(), mono_map);
  std::set<std::string> region;
  for (int v : src->vertices()) {
    for (int w : mono.vertex_image(v).vertices) region.insert(t.name(w));
  }
  const bool edge_only = region.empty() && t.vertex_count() > 0;
  if (edge_only) {
    int e = mono(src->root());
    region.insert(t.name(t.has_vertex(e) ? e : t.parent(e)));
  }

  std::vector<Factor> faces_down;  // faces from T downwards
  TreePtr cur = f.target_ptr();
  for (;;) {
    int pick = -1;
    for (int v : cur->vertices()) {
      if (!region.count(cur->name(v)) && outer_removable(*cur, v)) {
        pick = v;
        break;
      }
    }
    if (pick < 0) break;
    TreeMorphism face = outer_face(cur, cur->name(pick));
    faces_down.push_back({FactorKind::Face, face});
    cur = face.source_ptr();
  }
  for (;;) {
    int pick = -1;
    for (int e : cur->inner_edges()) {
      if (!colours.count(cur->name(e))) {
        pick = e;
        break;
      }
    }
    if (pick < 0) break;
    TreeMorphism face = inner_face(cur, cur->name(pick));
    faces_down.push_back({FactorKind::Face, face});
    cur = face.source_ptr();
  }
  if (edge_only) {
    TreeMorphism face = edge_inclusion(cur, *colours.begin());
    faces_down.push_back({FactorKind::Face, face});
    cur = face.source_ptr();
  }

  std::vector<int> iso_map(src->edge_count());
  for (int e = 0; e < src->edge_count(); ++e) iso_map[e] = cur->index(img[src->name(e)]);
  TreeMorphism iso(src, cur, std::move(iso_map));
  if (!iso.is_iso()) fail("internal", "classify: residual map is not an isomorphism");
  out.factors.push_back({FactorKind::Iso, iso});
  for (auto it = faces_down.rbegin(); it != faces_down.rend(); ++it) out.factors.push_back(*it);
  return out;
}

}  // namespace dendro
