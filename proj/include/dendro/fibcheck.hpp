#pragma once

// Bounded lifting checks against horn-like inclusions Λ ⊆ Ω[T].
//
// A filler problem for p: X -> S at a tree T is a dendrex s ∈ S_T together
// with a map u: Λ -> X over s. It has a lift iff some x ∈ X_T over s
// restricts to u; restrictions are compared on the generators of Λ (its
// nondegenerate elements that are not a face of a nondegenerate element).

#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "dendro/dset.hpp"
#include "dendro/error.hpp"
#include "dendro/operad.hpp"
#include "dendro/skeleton.hpp"
#include "dendro/sset.hpp"

namespace dendro {

// ---------------------------------------------------------------------------
// Single lifting problems

struct LiftingProblem {
  DendrMap left;    // i: A -> B, a monomorphism
  DendrMap top;     // u: A -> X
  DendrMap bottom;  // v: B -> S
  DendrMap p;       // X -> S
};

inline void check_square(const LiftingProblem& q) {
  if (q.left.source != q.top.source || q.left.target != q.bottom.source || q.top.target != q.p.source ||
      q.bottom.target != q.p.target) {
    fail("argument", "lifting problem maps do not fit together");
  }
  for (int t = 0; t < q.left.source->tree_count(); ++t) {
    for (Id a = 0; a < q.left.source->size(t); ++a) {
      if (q.p(t, q.top(t, a)) != q.bottom(t, q.left(t, a))) fail("argument", "lifting square does not commute");
    }
  }
}

inline std::optional<DendrMap> has_lift(const LiftingProblem& q) {
  check_square(q);
  MapSearch search(q.left.target, q.p.source);
  search.over(q.bottom, q.p);
  search.prescribe(q.left, q.top);
  return search.first();
}

// ---------------------------------------------------------------------------
// Families of horn problems

struct HornProblem {
  std::string clause;
  int tree = 0;  // skeleton index
  std::string face;  // what is omitted or filled, for reports
  std::vector<FaceSpec> faces;
};

struct Witness {
  std::string clause;
  std::string tree;
  std::string face;
  std::string base;  // label of s ∈ S_T
  std::vector<std::pair<std::string, std::string>> horn;  // generator of Λ -> its value in X
};

struct CheckReport {
  std::string property;
  bool pass = true;
  int bound = 0;
  int max_arity = 0;
  std::size_t problems = 0;
  std::optional<Witness> witness;
  std::optional<bool> restriction_kan;
  std::optional<HornInstance> restriction_witness;
};

namespace detail {

inline std::string face_label(const Tree& t, const FaceSpec& f) {
  return std::string(face_kind_name(f.kind)) + " " + t.name(f.edge);
}

inline std::vector<FaceSpec> all_but(const Tree& t, const FaceSpec& omitted) {
  std::vector<FaceSpec> out;
  for (const auto& f : face_specs(t)) {
    if (!(f == omitted)) out.push_back(f);
  }
  return out;
}

// Every iterated face of T stays under the arity cap: no subtree has more
// than max_arity leaves. Horns at other trees lose relations to truncation.
inline bool face_closed(const Tree& t, int max_arity) {
  TreeOperations ops(t);
  for (int c = 0; c < t.edge_count(); ++c) {
    for (const auto& s : ops.rooted_at(c)) {
      if (static_cast<int>(s.leaves.size()) > max_arity) return false;
    }
  }
  return true;
}

inline bool in_bounds(const Skeleton& sk, int t, int bound) {
  return sk.tree(t).vertex_count() <= bound && face_closed(sk.tree(t), sk.bounds().max_arity);
}

inline bool is_leaf_vertex(const Tree& t, int v) {
  if (!t.has_vertex(v)) return false;
  for (int c : t.children(v)) {
    if (!t.is_leaf(c)) return false;
  }
  return true;
}

}  // namespace detail

inline std::vector<HornProblem> inner_horn_problems(const Skeleton& sk, int bound) {
  std::vector<HornProblem> out;
  for (int t = 0; t < sk.tree_count(); ++t) {
    if (!detail::in_bounds(sk, t, bound)) continue;
    const Tree& tr = sk.tree(t);
    for (int e : tr.inner_edges()) {
      FaceSpec f{FaceKind::Inner, e};
      out.push_back({"inner-horn", t, detail::face_label(tr, f), detail::all_but(tr, f)});
    }
  }
  return out;
}

// ⨿ η_{c_i} -> Ω[C_n] for n = 0..max arity, nullary first.
inline std::vector<HornProblem> corolla_problems(const Skeleton& sk, int bound) {
  std::vector<HornProblem> out;
  if (bound < 1) return out;
  for (int n = 0; n <= sk.bounds().max_arity; ++n) {
    const int t = sk.locate(corolla(n)).first;
    const Tree& tr = sk.tree(t);
    std::vector<FaceSpec> leaves;
    for (int e : tr.leaves()) leaves.push_back({FaceKind::Edge, e});
    out.push_back({"corolla", t, "C_" + std::to_string(n) + " leaves", leaves});
  }
  return out;
}

// Λ^v[T] for leaf vertices v of trees with at least two vertices.
inline std::vector<HornProblem> leaf_horn_problems(const Skeleton& sk, int bound) {
  std::vector<HornProblem> out;
  for (int t = 0; t < sk.tree_count(); ++t) {
    if (!detail::in_bounds(sk, t, bound)) continue;
    const Tree& tr = sk.tree(t);
    if (tr.vertex_count() < 2) continue;
    for (int v : tr.vertices()) {
      if (!detail::is_leaf_vertex(tr, v)) continue;
      FaceSpec f{FaceKind::Outer, v};
      out.push_back({"leaf-horn", t, detail::face_label(tr, f), detail::all_but(tr, f)});
    }
  }
  return out;
}

// Horns omitting any face other than the root chop.
inline std::vector<HornProblem> non_root_horn_problems(const Skeleton& sk, int bound) {
  std::vector<HornProblem> out;
  for (int t = 0; t < sk.tree_count(); ++t) {
    if (!detail::in_bounds(sk, t, bound)) continue;
    const Tree& tr = sk.tree(t);
    if (tr.vertex_count() < 2) continue;
    for (const auto& f : face_specs(tr)) {
      if (f.kind == FaceKind::Outer && f.edge == tr.root()) continue;
      out.push_back({"non-root-horn", t, detail::face_label(tr, f), detail::all_but(tr, f)});
    }
  }
  return out;
}

// Root-chop horns of trees whose root vertex is unary.
inline std::vector<HornProblem> unary_root_horn_problems(const Skeleton& sk, int bound) {
  std::vector<HornProblem> out;
  for (int t = 0; t < sk.tree_count(); ++t) {
    if (!detail::in_bounds(sk, t, bound)) continue;
    const Tree& tr = sk.tree(t);
    if (tr.vertex_count() < 2 || tr.children(tr.root()).size() != 1) continue;
    FaceSpec f{FaceKind::Outer, tr.root()};
    out.push_back({"unary-root-horn", t, detail::face_label(tr, f), detail::all_but(tr, f)});
  }
  return out;
}

inline std::vector<HornProblem> boundary_problems(const Skeleton& sk, int bound) {
  std::vector<HornProblem> out;
  for (int t = 0; t < sk.tree_count(); ++t) {
    if (!detail::in_bounds(sk, t, bound)) continue;
    const Tree& tr = sk.tree(t);
    out.push_back({"boundary", t, "boundary", face_specs(tr)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// The checker

class HornChecker {
 public:
  explicit HornChecker(DendrMap p) : p_(std::move(p)) {
    if (p_.source->skeleton_ptr() != p_.target->skeleton_ptr()) fail("argument", "map between different bounds");
  }

  // Runs the problems in order; stops at the first failure.
  void run(const std::vector<HornProblem>& family, CheckReport& report) {
    for (const auto& problem : family) {
      if (!report.pass) return;
      solve(problem, report);
    }
  }

 private:
  const DSetPtr& rep(int t) {
    auto it = reps_.find(t);
    if (it == reps_.end()) {
      it = reps_.emplace(t, representable(p_.source->skeleton().tree(t), p_.source->skeleton_ptr())).first;
    }
    return it->second;
  }

  void solve(const HornProblem& problem, CheckReport& report) {
    const DendroidalSet& x = *p_.source;
    const DendroidalSet& s = *p_.target;
    const Skeleton& sk = x.skeleton();
    const int t = problem.tree;
    const DSetPtr& omega = rep(t);
    const SubObject horn = face_union(omega, problem.faces);
    const DendroidalSet& lambda = *horn.object;
    const Presentation& pr = lambda.presentation();

    // Generators of Λ.
    std::vector<std::vector<char>> hit(sk.tree_count());
    for (int r = 0; r < sk.tree_count(); ++r) hit[r].assign(lambda.size(r), 0);
    for (int u = 0; u < sk.tree_count(); ++u) {
      for (const auto& f : sk.faces_of(u)) {
        const int r = sk.morphism(f.morphism).source;
        for (Id z = 0; z < lambda.size(u); ++z) {
          if (!lambda.is_degenerate(u, z)) hit[r][lambda.act_generator(f.morphism, z)] = 1;
        }
      }
    }
    std::vector<std::pair<int, Id>> gens;
    for (int r = 0; r < sk.tree_count(); ++r) {
      for (Id y = 0; y < lambda.size(r); ++y) {
        if (!hit[r][y] && !lambda.is_degenerate(r, y)) gens.push_back({r, y});
      }
    }

    // Restrictions of the dendrices of X at T.
    std::unordered_set<Key, VectorHash> restrictions;
    for (Id e = 0; e < x.size(t); ++e) {
      Key k{static_cast<int>(p_(t, e))};
      for (auto [r, y] : gens) k.push_back(static_cast<int>(x.act(pr.morphism_of[r][y], e)));
      restrictions.insert(std::move(k));
    }

    MapSearch search(horn.object, p_.source);
    DendrMap to_base{horn.object, p_.target, std::vector<std::vector<Id>>(sk.tree_count())};
    for (Id base = 0; base < s.size(t) && report.pass; ++base) {
      for (int r = 0; r < sk.tree_count(); ++r) {
        to_base.maps[r].resize(lambda.size(r));
        for (Id y = 0; y < lambda.size(r); ++y) to_base.maps[r][y] = s.act(pr.morphism_of[r][y], base);
      }
      search.over(to_base, p_);
      search.for_each([&](const std::vector<std::vector<Id>>& u) {
        ++report.problems;
        Key k{static_cast<int>(base)};
        for (auto [r, y] : gens) k.push_back(static_cast<int>(u[r][y]));
        if (restrictions.count(k)) return true;
        Witness w{problem.clause, sk.tree(t).to_string(), problem.face, s.label(t, base), {}};
        for (auto [r, y] : gens) w.horn.emplace_back(lambda.label(r, y), x.label(r, u[r][y]));
        report.pass = false;
        report.witness = std::move(w);
        return false;
      });
    }
  }

  DendrMap p_;
  std::unordered_map<int, DSetPtr> reps_;
};

inline CheckReport run_checks(const std::string& property, const DendrMap& p, int bound,
                              const std::vector<std::vector<HornProblem>>& families) {
  const Skeleton& sk = p.source->skeleton();
  if (bound > sk.bounds().max_vertices) fail("bound", "check bound exceeds the skeleton bound");
  CheckReport report{property, true, bound, sk.bounds().max_arity, 0, std::nullopt, std::nullopt, std::nullopt};
  HornChecker checker(p);
  for (const auto& family : families) checker.run(family, report);
  return report;
}

// The terminal dendroidal set and the unique map to it.
inline DSetPtr terminal(const SkeletonPtr& skel) { return nerve(comm(), skel); }

inline DendrMap to_terminal(const DSetPtr& x, const DSetPtr& terminal_object) {
  DendrMap m{x, terminal_object, {}};
  for (int t = 0; t < x->tree_count(); ++t) m.maps.emplace_back(x->size(t), 0);
  return m;
}

inline DendrMap to_terminal(const DSetPtr& x) { return to_terminal(x, terminal(x->skeleton_ptr())); }

inline CheckReport is_inner_fibration(const DendrMap& p, int bound) {
  const Skeleton& sk = p.source->skeleton();
  return run_checks("inner-fibration", p, bound, {inner_horn_problems(sk, bound)});
}

inline CheckReport is_infty_operad(const DSetPtr& x, int bound) {
  auto r = is_inner_fibration(to_terminal(x), bound);
  r.property = "infty-operad";
  return r;
}

inline CheckReport is_left_fibration(const DendrMap& p, int bound) {
  const Skeleton& sk = p.source->skeleton();
  return run_checks("left-fibration", p, bound,
                    {inner_horn_problems(sk, bound), corolla_problems(sk, bound), leaf_horn_problems(sk, bound)});
}

// Conditions (i)-(iii) over the terminal object, plus the Kan condition of
// the restriction i*X up to min(bound, linear bound).
inline CheckReport is_dendroidal_kan(const DSetPtr& x, int bound) {
  const Skeleton& sk = x->skeleton();
  auto r = run_checks("dendroidal-kan", to_terminal(x), bound,
                      {corolla_problems(sk, bound), non_root_horn_problems(sk, bound),
                       unary_root_horn_problems(sk, bound)});
  auto i_star = std::make_shared<const SimplicialSet>(restrict(*x));
  r.restriction_witness = kan_check(i_star, std::min(bound, i_star->dimension()));
  r.restriction_kan = !r.restriction_witness.has_value();
  return r;
}

inline CheckReport is_trivial_fibration(const DendrMap& p, int bound) {
  const Skeleton& sk = p.source->skeleton();
  return run_checks("trivial-fibration", p, bound, {boundary_problems(sk, bound)});
}

// Left lifting of i*(p) against Λ^n_k, 0 <= k < n <= degree.
inline std::optional<HornInstance> simplicial_left_lifting(const DendrMap& p, int degree) {
  const SimplicialMap q = restrict_map(p);
  return horn_lifting(q, std::min(degree, q.source->dimension()), [](int n, int k) { return k < n; });
}

// ---------------------------------------------------------------------------
// Generating left anodynes

struct Anodyne {
  std::string kind;  // "leaf-horn" or "corolla"
  int tree = 0;      // skeleton index
  std::string description;
  std::vector<FaceSpec> faces;  // the inclusion is face_union(Ω[tree], faces)
};

inline std::vector<Anodyne> generating_left_anodynes(const Skeleton& sk, int bound) {
  if (bound > sk.bounds().max_vertices) fail("bound", "anodyne bound exceeds the skeleton bound");
  std::vector<Anodyne> out;
  for (int t = 0; t < sk.tree_count(); ++t) {
    const Tree& tr = sk.tree(t);
    if (tr.vertex_count() < 2 || tr.vertex_count() > bound) continue;
    for (int v : tr.vertices()) {
      if (!detail::is_leaf_vertex(tr, v)) continue;
      FaceSpec f{FaceKind::Outer, v};
      out.push_back({"leaf-horn", t, "horn " + detail::face_label(tr, f) + " of " + tr.to_string(),
                     detail::all_but(tr, f)});
    }
  }
  for (const auto& c : corolla_problems(sk, bound)) {
    out.push_back({"corolla", c.tree, c.face + " into " + sk.tree(c.tree).to_string(), c.faces});
  }
  return out;
}

inline SubObject anodyne_map(const SkeletonPtr& skel, const Anodyne& a) {
  return face_union(representable(skel->tree(a.tree), skel), a.faces);
}

}  // namespace dendro
