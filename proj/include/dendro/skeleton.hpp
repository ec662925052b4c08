#pragma once

// The truncated tree category: one canonical tree per iso class with at most
// `max_vertices` vertices of arity at most `max_arity`, and every morphism
// between them. Presheaves (dendroidal sets) are tabulated over a skeleton.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dendro/error.hpp"
#include "dendro/omega.hpp"
#include "dendro/tree.hpp"

namespace dendro {

struct Bounds {
  int max_vertices = 4;
  int max_arity = 3;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

enum class GeneratorKind { Face, Degeneracy, Automorphism };

struct FaceRecord {
  int morphism;
  FaceKind kind;
  int edge;  // in the target tree: contracted edge, chopped vertex or included edge
};

struct DegeneracyRecord {
  int morphism;
  int vertex;  // collapsed unary vertex of the source tree
};

struct MorphismRecord {
  int source;
  int target;
  std::vector<int> edge_map;
  bool injective;
  bool surjective;
};

// Largest bounds a skeleton is built for; the morphism count grows past
// 9 million at five vertices.
inline constexpr Bounds kSkeletonCap{4, 3};

class Skeleton {
 public:
  explicit Skeleton(Bounds bounds) : bounds_(bounds) {
    if (bounds.max_vertices > kSkeletonCap.max_vertices || bounds.max_arity > kSkeletonCap.max_arity ||
        bounds.max_vertices < 0 || bounds.max_arity < 0) {
      fail("bound", "skeleton bounds must lie within " + std::to_string(kSkeletonCap.max_vertices) +
                        " vertices and arity " + std::to_string(kSkeletonCap.max_arity));
    }
    auto trees = enumerate_trees(bounds.max_vertices, bounds.max_arity);
    for (auto& t : trees) {
      code_index_.emplace(t.code(), static_cast<int>(trees_.size()));
      trees_.push_back(share(std::move(t)));
    }
    const int n = tree_count();
    std::vector<TreeOperations> ops;
    for (auto& t : trees_) ops.emplace_back(*t);
    hom_.assign(static_cast<std::size_t>(n) * n, {});
    into_.assign(n, {});
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        for_each_hom(*trees_[s], *trees_[t], ops[t], [&](const std::vector<int>& m) {
          add_morphism(s, t, m);
        });
      }
    }
    identity_.resize(n);
    for (int t = 0; t < n; ++t) {
      std::vector<int> id(trees_[t]->edge_count());
      std::iota(id.begin(), id.end(), 0);
      identity_[t] = find(t, t, id);
      for (int m : hom(t, t)) {
        if (morphisms_[m].injective && morphisms_[m].surjective) autos_[t].push_back(m);
      }
    }
    build_generators();
  }

  // Process-wide cache, one skeleton per bounds value.
  static std::shared_ptr<const Skeleton> shared(Bounds b) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const Skeleton>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[{b.max_vertices, b.max_arity}];
    if (!slot) slot = make(b);
    return slot;
  }

  static std::shared_ptr<const Skeleton> make(Bounds b) { return std::make_shared<const Skeleton>(b); }

  const Bounds& bounds() const { return bounds_; }
  int tree_count() const { return static_cast<int>(trees_.size()); }
  const Tree& tree(int i) const { return *trees_[i]; }
  const TreePtr& tree_ptr(int i) const { return trees_[i]; }
  int vertex_count(int i) const { return trees_[i]->vertex_count(); }

  int index_of_code(const std::string& code) const {
    auto it = code_index_.find(code);
    return it == code_index_.end() ? -1 : it->second;
  }

  // Skeleton index of `t` plus an iso t -> tree(index); throws when t is
  // outside the bounds.
  std::pair<int, std::vector<int>> locate(const Tree& t) const {
    int idx = index_of_code(t.code());
    if (idx < 0) {
      fail("bound", "tree " + t.to_string() + " is outside the bounds (max vertices " +
                        std::to_string(bounds_.max_vertices) + ", max arity " +
                        std::to_string(bounds_.max_arity) + ")");
    }
    return {idx, canonicalize(t).iso};
  }

  int morphism_count() const { return static_cast<int>(morphisms_.size()); }
  const MorphismRecord& morphism(int m) const { return morphisms_[m]; }
  std::span<const int> hom(int s, int t) const { return hom_[static_cast<std::size_t>(s) * tree_count() + t]; }
  // All morphisms with the given target.
  std::span<const int> into(int t) const { return into_[t]; }
  std::span<const int> automorphisms(int t) const { return autos_.at(t); }

  // Generators of Ω within the bounds, grouped by target: elementary faces,
  // elementary degeneracies and a generating set of each Aut(t). Every
  // morphism is a composite of generators.
  std::span<const int> generators_into(int t) const { return generators_into_[t]; }
  // Position of generator `m` in generators_into(target(m)), or -1.
  int generator_slot(int m) const { return generator_slot_[m]; }
  GeneratorKind generator_kind(int m) const { return generator_kind_.at(m); }
  // In-bound elementary faces of tree(t).
  std::span<const FaceRecord> faces_of(int t) const { return faces_of_[t]; }
  std::span<const DegeneracyRecord> degeneracies_from(int s) const { return degeneracies_from_[s]; }
  std::span<const int> automorphism_generators(int t) const { return aut_generators_[t]; }

  // Generators g_0, ..., g_k with m = g_0 ∘ g_1 ∘ ... ∘ g_k; empty for
  // identities.
  std::vector<int> factor(int m) const {
    {
      std::lock_guard<std::mutex> lock(factor_mutex_);
      auto it = factor_cache_.find(m);
      if (it != factor_cache_.end()) return it->second;
    }
    std::vector<int> out = compute_factor(m);
    std::lock_guard<std::mutex> lock(factor_mutex_);
    factor_cache_.emplace(m, out);
    return out;
  }
  int identity(int t) const { return identity_[t]; }

  int find(int s, int t, const std::vector<int>& edge_map) const {
    std::vector<int> key{s, t};
    key.insert(key.end(), edge_map.begin(), edge_map.end());
    auto it = lookup_.find(key);
    return it == lookup_.end() ? -1 : it->second;
  }

  int compose(int g, int f) const {
    const auto& mf = morphisms_[f];
    const auto& mg = morphisms_[g];
    std::vector<int> m(mf.edge_map.size());
    for (std::size_t e = 0; e < m.size(); ++e) m[e] = mg.edge_map[mf.edge_map[e]];
    return find(mf.source, mg.target, m);
  }

  bool is_iso(int m) const { return morphisms_[m].injective && morphisms_[m].surjective; }
  // Non-invertible epimorphisms: composites of degeneracies (and an iso).
  bool is_degeneracy(int m) const { return morphisms_[m].surjective && !morphisms_[m].injective; }

  TreeMorphism as_morphism(int m) const {
    const auto& r = morphisms_[m];
    return TreeMorphism(trees_[r.source], trees_[r.target], r.edge_map);
  }

  // Index of L_n, or -1 when outside the bounds.
  int linear(int n) const {
    if (n == 0) return index_of_code("|");
    if (bounds_.max_arity < 1) return -1;
    std::string code = "|";
    for (int i = 0; i < n; ++i) code = "(" + code + ")";
    return index_of_code(code);
  }

  // Position of each edge of L_n in [n] (leaf = 0, root = n).
  static std::vector<int> linear_positions(const Tree& l) {
    const int n = l.edge_count() - 1;
    std::vector<int> pos(l.edge_count());
    for (int e = 0; e < l.edge_count(); ++e) {
      int depth = 0;
      for (int x = e; l.parent(x) >= 0; x = l.parent(x)) ++depth;
      pos[e] = n - depth;
    }
    return pos;
  }

  // The morphism L_a -> L_b induced by a monotone map theta: [a] -> [b].
  int linear_morphism(const std::vector<int>& theta, int b) const {
    const int a = static_cast<int>(theta.size()) - 1;
    int s = linear(a), t = linear(b);
    if (s < 0 || t < 0) fail("bound", "linear tree outside the bounds");
    auto ps = linear_positions(*trees_[s]);
    auto pt = linear_positions(*trees_[t]);
    std::vector<int> edge_at(b + 1);
    for (int e = 0; e < trees_[t]->edge_count(); ++e) edge_at[pt[e]] = e;
    std::vector<int> m(trees_[s]->edge_count());
    for (int e = 0; e < trees_[s]->edge_count(); ++e) m[e] = edge_at[theta[ps[e]]];
    int id = find(s, t, m);
    if (id < 0) fail("argument", "map of linear trees is not monotone");
    return id;
  }

 private:
  void build_generators() {
    const int n = tree_count();
    generators_into_.assign(n, {});
    faces_of_.assign(n, {});
    degeneracies_from_.assign(n, {});
    aut_generators_.assign(n, {});
    generator_slot_.assign(morphisms_.size(), -1);
    auto add = [&](int m, GeneratorKind kind) {
      if (generator_slot_[m] >= 0) return;
      int t = morphisms_[m].target;
      generator_slot_[m] = static_cast<int>(generators_into_[t].size());
      generators_into_[t].push_back(m);
      generator_kind_.emplace(m, kind);
    };
    for (int t = 0; t < n; ++t) {
      for (const Face& f : faces(trees_[t])) {
        // Contracting an inner edge can exceed the arity cap; such faces
        // lie outside the truncation.
        if (index_of_code(f.map.source().code()) < 0) continue;
        auto [s, iso] = locate(f.map.source());
        std::vector<int> m(trees_[s]->edge_count());
        for (int e = 0; e < f.map.source().edge_count(); ++e) m[iso[e]] = f.map(e);
        int id = find(s, t, m);
        faces_of_[t].push_back({id, f.kind, trees_[t]->index(f.edge)});
        add(id, GeneratorKind::Face);
      }
    }
    for (int s = 0; s < n; ++s) {
      for (int v : trees_[s]->vertices()) {
        if (trees_[s]->arity(v) != 1) continue;
        TreeMorphism d = degeneracy(trees_[s], trees_[s]->name(v));
        auto [t, iso] = locate(d.target());
        std::vector<int> m(trees_[s]->edge_count());
        for (int e = 0; e < trees_[s]->edge_count(); ++e) m[e] = iso[d(e)];
        int id = find(s, t, m);
        degeneracies_from_[s].push_back({id, v});
        add(id, GeneratorKind::Degeneracy);
      }
    }
    for (int t = 0; t < n; ++t) {
      std::set<int> closure{identity_[t]};
      for (int a : autos_[t]) {
        if (closure.count(a)) continue;
        aut_generators_[t].push_back(a);
        add(a, GeneratorKind::Automorphism);
        std::vector<int> frontier(closure.begin(), closure.end());
        while (!frontier.empty()) {
          std::vector<int> next;
          for (int x : frontier) {
            for (int g : aut_generators_[t]) {
              int y = compose(g, x);
              if (closure.insert(y).second) next.push_back(y);
            }
          }
          frontier = std::move(next);
        }
      }
    }
  }

  std::vector<int> compute_factor(int m) const {
    const auto& r = morphisms_[m];
    if (m == identity_[r.target]) return {};
    if (generator_slot_[m] >= 0) return {m};
    if (!r.injective) {
      // Split off a degeneracy collapsing a unary vertex sent to a unit.
      for (const auto& d : degeneracies_from_[r.source]) {
        int in = trees_[r.source]->children(d.vertex)[0];
        if (r.edge_map[d.vertex] != r.edge_map[in]) continue;
        const auto& dr = morphisms_[d.morphism];
        std::vector<int> rest(trees_[dr.target]->edge_count(), -1);
        for (std::size_t e = 0; e < r.edge_map.size(); ++e) rest[dr.edge_map[e]] = r.edge_map[e];
        int id = find(dr.target, r.target, rest);
        if (id < 0) fail("internal", "degeneracy split failed");
        auto out = factor(id);
        out.push_back(d.morphism);
        return out;
      }
      fail("internal", "non-injective morphism without a collapsible vertex");
    }
    if (r.source != r.target || !r.surjective) {
      for (const auto& f : faces_of_[r.target]) {
        const auto& fr = morphisms_[f.morphism];
        std::vector<int> inverse(trees_[r.target]->edge_count(), -1);
        for (std::size_t e = 0; e < fr.edge_map.size(); ++e) inverse[fr.edge_map[e]] = static_cast<int>(e);
        std::vector<int> rest(r.edge_map.size());
        bool inside = true;
        for (std::size_t e = 0; e < rest.size() && inside; ++e) {
          rest[e] = inverse[r.edge_map[e]];
          inside = rest[e] >= 0;
        }
        if (!inside) continue;
        int id = find(r.source, fr.source, rest);
        if (id < 0) continue;
        auto out = factor(id);
        out.insert(out.begin(), f.morphism);
        return out;
      }
      fail("internal", "monomorphism without a face factorization");
    }
    // Automorphism: shortest word in the generators.
    const int t = r.target;
    std::map<int, std::pair<int, int>> prev{{identity_[t], {-1, -1}}};
    std::vector<int> frontier{identity_[t]};
    while (!prev.count(m) && !frontier.empty()) {
      std::vector<int> next;
      for (int x : frontier) {
        for (int g : aut_generators_[t]) {
          int y = compose(x, g);
          if (prev.emplace(y, std::make_pair(x, g)).second) next.push_back(y);
        }
      }
      frontier = std::move(next);
    }
    std::vector<int> word;
    for (int x = m; x != identity_[t]; x = prev.at(x).first) word.push_back(prev.at(x).second);
    std::reverse(word.begin(), word.end());
    return word;
  }

  void add_morphism(int s, int t, const std::vector<int>& m) {
    int id = static_cast<int>(morphisms_.size());
    TreeMorphism tm(trees_[s], trees_[t], m);
    morphisms_.push_back({s, t, m, tm.is_injective(), tm.is_surjective()});
    hom_[static_cast<std::size_t>(s) * tree_count() + t].push_back(id);
    into_[t].push_back(id);
    std::vector<int> key{s, t};
    key.insert(key.end(), m.begin(), m.end());
    lookup_.emplace(std::move(key), id);
  }

  Bounds bounds_;
  std::vector<TreePtr> trees_;
  std::unordered_map<std::string, int> code_index_;
  std::vector<MorphismRecord> morphisms_;
  std::vector<std::vector<int>> hom_;
  std::vector<std::vector<int>> into_;
  std::vector<int> identity_;
  std::unordered_map<int, std::vector<int>> autos_;
  std::unordered_map<std::vector<int>, int, VectorHash> lookup_;
  std::vector<std::vector<int>> generators_into_;
  std::vector<int> generator_slot_;
  std::unordered_map<int, GeneratorKind> generator_kind_;
  std::vector<std::vector<FaceRecord>> faces_of_;
  std::vector<std::vector<DegeneracyRecord>> degeneracies_from_;
  std::vector<std::vector<int>> aut_generators_;
  mutable std::mutex factor_mutex_;
  mutable std::unordered_map<int, std::vector<int>> factor_cache_;
};

using SkeletonPtr = std::shared_ptr<const Skeleton>;

}  // namespace dendro
