#include <gtest/gtest.h>

#include <map>
#include <set>

#include "dendro/dendro.hpp"
#include "oracles.hpp"

using namespace dendro;

namespace {

std::set<std::string> codes(const std::vector<Tree>& trees) {
  std::set<std::string> out;
  for (const auto& t : trees) out.insert(oracle::canon(t));
  return out;
}

std::set<std::vector<int>> edge_maps(const std::vector<TreeMorphism>& ms) {
  std::set<std::vector<int>> out;
  for (const auto& m : ms) out.insert(m.edge_map());
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// trees

TEST(Trees, ParseSerializeRoundTrip) {
  for (const char* text : {"e", "r()", "r(a)", "r(a,b(c,d),e())", "x(y(z(w)))"}) {
    EXPECT_EQ(serialize(parse_tree(text)), text);
  }
  EXPECT_EQ(parse_tree(" r ( a , b ) ").to_string(), "r(a,b)");
}

TEST(Trees, ParseErrorsCarryKinds) {
  auto kind_of = [](const char* text) {
    try {
      parse_tree(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return std::string("none");
  };
  EXPECT_EQ(kind_of("r(a,a)"), "duplicate");
  EXPECT_EQ(kind_of("r(a"), "syntax");
  EXPECT_EQ(kind_of(""), "syntax");
}

TEST(Trees, Stats) {
  const TreeStats s = tree_stats(parse_tree("r(a,b(c,d),e())"));
  EXPECT_EQ(s.vertices, 3);
  EXPECT_EQ(s.edges, 6);
  EXPECT_EQ(s.inner, (std::set<std::string>{"b", "e"}));
  EXPECT_EQ(s.leaves, (std::set<std::string>{"a", "c", "d"}));
  EXPECT_EQ(s.root, "r");
}

TEST(Trees, ChildOrderDoesNotMatterForEquality) {
  EXPECT_EQ(parse_tree("r(a,b(c))"), parse_tree("r(b(c),a)"));
  EXPECT_FALSE(parse_tree("r(a,b(c))") == parse_tree("r(a(c),b)"));
}

TEST(Trees, AutomorphismsMatchBruteForce) {
  for (const Tree& t : enumerate_trees(4, 3)) {
    EXPECT_EQ(automorphisms(t).size(), oracle::automorphism_count(t)) << t.to_string();
  }
  EXPECT_EQ(automorphisms(corolla(3)).size(), 6u);
  EXPECT_EQ(automorphisms(parse_tree("r(a(x,y),b(u,v))")).size(), 8u);
  EXPECT_EQ(automorphisms(parse_tree("r(a(),b())")).size(), 2u);
  EXPECT_EQ(automorphisms(parse_tree("r(a(b(c)))")).size(), 1u);
}

TEST(Trees, EnumerationMatchesGrowth) {
  for (int arity : {2, 3}) {
    const auto listed = enumerate_trees(5, arity);
    EXPECT_EQ(codes(listed).size(), listed.size()) << "duplicate shapes";
    EXPECT_EQ(codes(listed), codes(oracle::grown_trees(5, arity)));
  }
  // Counts by vertex number, arity <= 3: 1, 4, 12, 56, 284, 1576.
  std::map<int, int> by;
  for (const Tree& t : enumerate_trees(5, 3)) ++by[t.vertex_count()];
  EXPECT_EQ(by, (std::map<int, int>{{0, 1}, {1, 4}, {2, 12}, {3, 56}, {4, 284}, {5, 1576}}));
  EXPECT_EQ(enumerate_trees(4, 3).size(), 357u);
}

TEST(Trees, EnumerationOrderAndCap) {
  const auto trees = enumerate_trees(3, 3);
  for (std::size_t i = 1; i < trees.size(); ++i) {
    EXPECT_LE(trees[i - 1].vertex_count(), trees[i].vertex_count());
  }
  EXPECT_THROW(enumerate_trees(kEnumerationCap + 1, 3), Error);
}

TEST(Trees, CanonicalizeGivesAnIso) {
  for (const char* text : {"r(b(c,d),a)", "r(a(),b(c(d)),e)"}) {
    const Tree t = parse_tree(text);
    const Canonical c = canonicalize(t);
    EXPECT_EQ(c.tree.code(), t.code());
    for (int e = 0; e < t.edge_count(); ++e) {
      EXPECT_EQ(t.has_vertex(e), c.tree.has_vertex(c.iso[e]));
      if (t.parent(e) >= 0) EXPECT_EQ(c.iso[t.parent(e)], c.tree.parent(c.iso[e]));
    }
  }
}

TEST(Trees, Graft) {
  const GraftResult g = graft(parse_tree("r(a,b)"), {{"a", parse_tree("a(x,y)")}, {"b", parse_tree("b()")}});
  EXPECT_EQ(g.tree, parse_tree("r(a(x,y),b())"));
  EXPECT_EQ(g.new_inner, (std::set<std::string>{"a", "b"}));
  EXPECT_THROW(graft(parse_tree("r(a(x))"), {{"a", parse_tree("a(y)")}}), Error);
  EXPECT_THROW(graft(parse_tree("r(a,b)"), {{"a", parse_tree("a(b)")}}), Error);
  EXPECT_THROW(graft(parse_tree("r(a,b)"), {{"a", parse_tree("c(x)")}}), Error);
}

TEST(Trees, SubtreeAboveInvertsGraft) {
  const Tree t = parse_tree("r(a(x,y(z)),b)");
  EXPECT_EQ(subtree_above(t, "a"), parse_tree("a(x,y(z))"));
  const Tree base = parse_tree("r(a,b)");
  EXPECT_EQ(graft(base, {{"a", subtree_above(t, "a")}}).tree, t);
}

// ---------------------------------------------------------------------------
// omega

TEST(Omega, HomMatchesBruteForce) {
  const auto trees = enumerate_trees(3, 2);
  for (const Tree& s : trees) {
    for (const Tree& t : trees) {
      auto got = edge_maps(enumerate_hom(share(s), share(t)));
      auto want = oracle::hom_maps(s, t);
      EXPECT_EQ(got, std::set<std::vector<int>>(want.begin(), want.end())) << s.to_string() << " -> " << t.to_string();
    }
  }
}

TEST(Omega, HomCounts) {
  for (const char* text : {"r", "r(a,b)", "r(a(),b(c,d))"}) {
    const TreePtr t = share(parse_tree(text));
    EXPECT_EQ(enumerate_hom(share(eta()), t).size(), static_cast<std::size_t>(t->edge_count()));
  }
  EXPECT_EQ(enumerate_hom(share(linear_tree(1)), share(linear_tree(2))).size(), 6u);
  EXPECT_EQ(enumerate_hom(share(corolla(2)), share(corolla(2))).size(), 2u);
  for (int n = 0; n <= 3; ++n) {
    for (int m = 0; m <= 3; ++m) {
      EXPECT_EQ(enumerate_hom(share(linear_tree(n)), share(linear_tree(m))).size(), oracle::monotone_count(n, m));
    }
  }
}

TEST(Omega, ComposeIsAssociative) {
  const TreePtr a = share(linear_tree(1)), b = share(parse_tree("r(x(y),z)")), c = share(parse_tree("r(x(y(u),w),z)"));
  for (const auto& f : enumerate_hom(a, b)) {
    for (const auto& g : enumerate_hom(b, c)) {
      for (const auto& h : enumerate_hom(c, c)) {
        EXPECT_EQ(compose(h, compose(g, f)), compose(compose(h, g), f));
      }
    }
  }
}

TEST(Omega, ClassifyRecomposes) {
  const auto trees = enumerate_trees(3, 2);
  for (const Tree& s : trees) {
    for (const Tree& t : trees) {
      for (const auto& f : enumerate_hom(share(s), share(t))) {
        const Classification c = classify(f);
        if (c.factors.empty()) {
          EXPECT_EQ(f, TreeMorphism::identity(f.source_ptr()));
          continue;
        }
        EXPECT_EQ(compose_all(c.factors[0].map, std::span(c.factors).subspan(1)), f);
        // Degeneracies first, then an iso, then faces.
        int stage = 0;
        for (const auto& factor : c.factors) {
          const int k = factor.kind == FactorKind::Degeneracy ? 0 : factor.kind == FactorKind::Iso ? 1 : 2;
          EXPECT_LE(stage, k);
          stage = k;
        }
        EXPECT_EQ(c.kind == MorphismClass::Iso, f.is_iso());
        EXPECT_EQ(c.kind == MorphismClass::Mono, f.is_injective() && !f.is_iso());
      }
    }
  }
}

TEST(Omega, FacesMatchShapeOracle) {
  for (const Tree& t : enumerate_trees(4, 3)) {
    const auto got = faces(share(t));
    const auto want = oracle::face_trees(t);
    ASSERT_EQ(got.size(), want.size()) << t.to_string();
    std::set<std::string> a, b;
    for (const auto& f : got) a.insert(f.edge + ":" + f.map.source().code());
    for (const auto& f : want) b.insert(f.edge + ":" + f.tree.code());
    EXPECT_EQ(a, b) << t.to_string();
    for (const auto& f : got) EXPECT_TRUE(f.map.is_injective());
  }
}

TEST(Omega, DegeneracyKeepsOutputName) {
  const TreePtr t = share(parse_tree("r(a(x),b)"));
  const TreeMorphism d = degeneracy(t, "a");
  EXPECT_EQ(d.target(), parse_tree("r(a,b)"));
  EXPECT_EQ(d.named_map().at("x"), "a");
  EXPECT_TRUE(d.is_surjective());
  EXPECT_FALSE(d.is_injective());
  EXPECT_THROW(degeneracy(t, "r"), Error);
}

TEST(Omega, FaceThenDegeneracyIdentity) {
  // Chopping a unary top vertex and then collapsing it is an iso.
  const TreePtr t = share(parse_tree("r(a(x),b)"));
  const TreeMorphism chop = outer_face(t, "a");
  const TreeMorphism d = degeneracy(t, "a");
  const TreeMorphism c = compose(d, chop);
  EXPECT_TRUE(c.is_iso());
}

TEST(Omega, InvalidEdgeMapRejected) {
  const TreePtr c2 = share(corolla(2)), l1 = share(linear_tree(1));
  EXPECT_THROW(TreeMorphism(c2, l1, {0, 1, 1}), Error);
  EXPECT_THROW(TreeMorphism(c2, l1, {0, 1}), Error);
}

// ---------------------------------------------------------------------------
// operads

TEST(Operads, AssocHasFactorialArities) {
  const auto p = assoc();
  std::size_t fact = 1;
  for (int n = 0; n <= 4; ++n) {
    if (n > 0) fact *= n;
    EXPECT_EQ(p->operations(0, n).size(), fact);
    EXPECT_EQ(comm()->operations(0, n).size(), 1u);
  }
}

TEST(Operads, AssocUnitAndAssociativity) {
  const auto p = assoc();
  const OpKey u = p->unit(0);
  for (const auto& f : p->operations(0, 2)) {
    EXPECT_EQ(p->compose(f, {u, u}), f);
    EXPECT_EQ(p->compose(u, {f}), f);
    for (const auto& g : p->operations(0, 2)) {
      for (const auto& h : p->operations(0, 2)) {
        // (f ∘_1 g) ∘_1 h = f ∘_1 (g ∘_1 h)
        const OpKey left = p->compose(p->compose(f, {g, u}), {h, u, u});
        const OpKey right = p->compose(f, {p->compose(g, {h, u}), u});
        EXPECT_EQ(left, right);
      }
    }
  }
}

TEST(Operads, AssocEquivariance) {
  const auto p = assoc();
  for (const auto& f : p->operations(0, 3)) {
    const OpKey swapped = p->act(f, {1, 0, 2});
    EXPECT_EQ(p->act(swapped, {1, 0, 2}), f);
    EXPECT_NE(swapped, f);
  }
}

TEST(Operads, FreeTreeOperadMatchesSubtrees) {
  const TreePtr t = share(parse_tree("r(a(x,y),b())"));
  const auto p = free_tree_operad(t);
  EXPECT_EQ(p->colour_count(), t->edge_count());
  for (int c = 0; c < t->edge_count(); ++c) {
    for (int n = 0; n <= 3; ++n) {
      for (const auto& f : p->operations(c, n)) {
        const Signature s = p->signature(f);
        EXPECT_TRUE(find_subtree(*t, s.output, s.inputs) || (n == 1 && s.inputs[0] == c));
      }
    }
  }
  // Operations into r, one per input ordering: the unit, (a,b), (x,y,b), (a) and (x,y).
  std::size_t total = 0;
  for (int n = 0; n <= 4; ++n) total += p->operations(t->index("r"), n).size();
  EXPECT_EQ(total, 1u + 2 + 6 + 1 + 2);
}

TEST(Operads, OperadMapsIntoComm) {
  for (const Tree& t : enumerate_trees(3, 3)) EXPECT_EQ(enumerate_operad_maps(t, *comm()).size(), 1u);
  EXPECT_EQ(enumerate_operad_maps(corolla(3), *assoc()).size(), 6u);
  EXPECT_EQ(enumerate_operad_maps(parse_tree("r(a(x,y),b)"), *assoc()).size(), 4u);
}

TEST(Operads, ByName) {
  EXPECT_EQ(operad_by_name("comm")->name(), "comm");
  EXPECT_EQ(operad_by_name("free(r(a,b))")->colour_count(), 3);
  EXPECT_THROW(operad_by_name("lie"), Error);
}

// ---------------------------------------------------------------------------
// sset

TEST(SSet, StandardSimplexCounts) {
  for (int n = 0; n <= 4; ++n) {
    const SimplicialSet s = standard_simplex(n, 4);
    const auto census = s.census();
    for (int k = 0; k <= 4; ++k) {
      EXPECT_EQ(s.size(k), oracle::monotone_count(k, n));
      // Nondegenerate k-simplices are (k+1)-subsets of [n].
      std::size_t binom = 1;
      for (int i = 0; i < k + 1; ++i) binom = binom * (n + 1 - i) / (i + 1);
      EXPECT_EQ(census[k], k <= n ? binom : 0u);
    }
  }
}

TEST(SSet, SimplicialIdentities) {
  const SimplicialSet x = product(standard_simplex(2, 3), standard_simplex(1, 3));
  for (int n = 2; n <= 3; ++n) {
    for (Id s = 0; s < x.size(n); ++s) {
      for (int i = 0; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
          EXPECT_EQ(x.face(n - 1, i, x.face(n, j, s)), x.face(n - 1, j - 1, x.face(n, i, s)));
        }
      }
    }
  }
  for (int n = 0; n < 3; ++n) {
    for (Id s = 0; s < x.size(n); ++s) {
      for (int i = 0; i <= n; ++i) {
        EXPECT_EQ(x.face(n + 1, i, x.degen(n, i, s)), s);
        EXPECT_EQ(x.face(n + 1, i + 1, x.degen(n, i, s)), s);
      }
    }
  }
}

TEST(SSet, ProductMatchesGridChains) {
  for (int n = 0; n <= 2; ++n) {
    for (int m = 0; m <= 2; ++m) {
      const auto census = product(standard_simplex(n, 4), standard_simplex(m, 4)).census();
      for (int k = 0; k <= 4; ++k) EXPECT_EQ(census[k], oracle::grid_chains(n, m, k));
    }
  }
}

TEST(SSet, HornsAndBoundaries) {
  EXPECT_EQ(boundary(2, 2).census(), (std::vector<std::size_t>{3, 3, 0}));
  EXPECT_EQ(horn(2, 1, 2).census(), (std::vector<std::size_t>{3, 2, 0}));
  EXPECT_EQ(horn(3, 0, 3).census(), (std::vector<std::size_t>{4, 6, 3, 0}));
  EXPECT_THROW(horn(2, 3), Error);
}

TEST(SSet, KanConditions) {
  auto point_set = std::make_shared<const SimplicialSet>(point(3));
  EXPECT_FALSE(kan_check(point_set, 3).has_value());
  auto d1 = std::make_shared<const SimplicialSet>(standard_simplex(1, 3));
  EXPECT_TRUE(kan_check(d1, 3).has_value());
  EXPECT_FALSE(inner_kan_check(std::make_shared<const SimplicialSet>(standard_simplex(2, 3)), 3).has_value());
  auto h = std::make_shared<const SimplicialSet>(horn(2, 1, 3));
  const auto w = inner_kan_check(h, 3);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->n, 2);
  EXPECT_EQ(w->k, 1);
}

TEST(SSet, Components) {
  EXPECT_EQ(pi0(boundary(1, 1)).size(), 2u);
  EXPECT_EQ(pi0(horn(2, 0, 2)).size(), 1u);
}

TEST(SSet, CubesAreProductsOfIntervals) {
  const CubeComplex square(std::set<std::string>{"a", "b"});
  const auto census = square.sset().census();
  for (int k = 0; k <= 2; ++k) EXPECT_EQ(census[k], oracle::grid_chains(1, 1, k));
  EXPECT_EQ(square.vertex_count(), 4u);
  EXPECT_THROW(CubeComplex(std::set<std::string>{"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k"}), Error);
}

TEST(SSet, PaddingMapsAreMonotoneInjections) {
  const CubeMap m = padding_map({"a"}, {"a", "b"}, {}, 1);
  EXPECT_TRUE(is_monotone(m));
  EXPECT_EQ(m.rule, (std::vector<unsigned>{2, 3}));
  EXPECT_THROW(padding_map({"a", "c"}, {"a", "b"}), Error);
  const CubeMap r = padding_map({"x"}, {"a", "b"}, {{"x", "b"}}, 0);
  EXPECT_EQ(r.rule, (std::vector<unsigned>{0, 2}));
}

TEST(SSet, HomSpaceOfInterval) {
  auto d1 = std::make_shared<const SimplicialSet>(standard_simplex(1, 3));
  const SimplicialSet m = simplicial_mapping_space(d1, d1, 3);
  // Map(Δ¹, Δ¹) is the nerve of the poset of monotone self-maps of [1].
  EXPECT_EQ(m.size(0), 3u);
  EXPECT_EQ(m.size(1), 6u);
  EXPECT_EQ(m.size(2), 10u);
  EXPECT_EQ(m.size(3), 15u);
  EXPECT_EQ(m.census(), (std::vector<std::size_t>{3, 3, 1, 0}));
  EXPECT_EQ(simplicial_maps(d1, d1, 100).size(), oracle::monotone_count(1, 1));
}

// ---------------------------------------------------------------------------
// wstraight

TEST(WStraight, OperationSpacesAreInnerEdgeCubes) {
  const WOperad w(share(parse_tree("r(b(a))")));
  const Tree& t = w.tree();
  EXPECT_EQ(w.space({{t.index("a")}, t.index("r")}), (std::vector<std::string>{"b"}));
  EXPECT_EQ(w.space({{t.index("b")}, t.index("r")}), (std::vector<std::string>{}));
  EXPECT_FALSE(w.space({{t.index("r")}, t.index("a")}).has_value());
  EXPECT_EQ(w.signatures().size(), 6u);
  EXPECT_EQ(w.describe(w.parse_signature("a;r")), "(a;r)");
}

TEST(WStraight, CompositionPutsOneOnGraftingEdges) {
  const WOperad w(share(parse_tree("r(b(a))")));
  const Tree& t = w.tree();
  const int r = t.index("r"), b = t.index("b"), a = t.index("a");
  const CubeMap m = w_compose(w, {{b}, r}, {{{a}, b}});
  EXPECT_TRUE(m.source_axes.empty());
  EXPECT_EQ(m.target_axes, (std::vector<std::string>{"b"}));
  EXPECT_EQ(m.rule, (std::vector<unsigned>{1}));
}

TEST(WStraight, StraighteningOfLinearTree) {
  const StraightAlgebra st(share(parse_tree("r(b(a))")));
  const Tree& t = st.tree();
  EXPECT_EQ(st.axes(t.index("r")), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(st.axes(t.index("a")), (std::vector<std::string>{}));
  const CubeMap m = st.structure_map({{t.index("b")}, t.index("r")});
  EXPECT_EQ(rule_string(m, 0), "01");
  EXPECT_EQ(rule_string(m, 1), "11");
}

TEST(WStraight, FacesPadInjectivelyAndDegeneraciesSurject) {
  for (const Tree& tree : enumerate_trees(3, 3)) {
    const TreePtr t = share(tree);
    for (const auto& f : faces(t)) {
      for (int c = 0; c < f.map.source().edge_count(); ++c) {
        const CubeMap m = straighten_face(f.map, c);
        EXPECT_TRUE(is_monotone(m));
        EXPECT_EQ(std::set<unsigned>(m.rule.begin(), m.rule.end()).size(), m.rule.size());
      }
    }
    for (int v : tree.vertices()) {
      if (tree.arity(v) != 1) continue;
      const TreeMorphism d = degeneracy(t, tree.name(v));
      for (int c = 0; c < tree.edge_count(); ++c) {
        const CubeMap m = straighten_face(d, c);
        EXPECT_TRUE(is_monotone(m));
        EXPECT_EQ(std::set<unsigned>(m.rule.begin(), m.rule.end()).size(), std::size_t{1} << m.target_axes.size());
      }
    }
  }
}

TEST(WStraight, NonElementaryMapsRejected) {
  const TreePtr t = share(parse_tree("r(a(b(c)))"));
  const TreeMorphism f = compose(inner_face(t, "a"), inner_face(inner_face(t, "a").source_ptr(), "b"));
  EXPECT_THROW(straighten_face(f, 0), Error);
  EXPECT_NO_THROW(straighten_map(f, 0));
}

TEST(WStraight, WMapOfIdentityIsIdentity) {
  const TreePtr t = share(parse_tree("r(a(x,y),b)"));
  const WOperad w(t);
  for (const auto& sig : w.signatures()) {
    const CubeMap m = w_map(TreeMorphism::identity(t), sig);
    for (unsigned v = 0; v < m.rule.size(); ++v) EXPECT_EQ(m.rule[v], v);
  }
}
