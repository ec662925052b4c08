#include <gtest/gtest.h>

#include <set>

#include "dendro/dendro.hpp"
#include "oracles.hpp"

using namespace dendro;

namespace {

SkeletonPtr small() { return Skeleton::shared({3, 3}); }
SkeletonPtr full() { return Skeleton::shared({4, 3}); }

DSetPtr embed(const SimplicialSet& k, const SkeletonPtr& sk) {
  return simplicial_embed(std::make_shared<const SimplicialSet>(k), sk);
}

std::size_t injective_count(const Tree& r, const Tree& t) {
  std::size_t n = 0;
  for (const auto& m : oracle::hom_maps(r, t)) {
    std::set<int> s(m.begin(), m.end());
    n += s.size() == m.size() ? 1 : 0;
  }
  return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// skeleton

TEST(Skeleton, SizesAndCap) {
  EXPECT_EQ(full()->tree_count(), 357);
  EXPECT_EQ(full()->morphism_count(), 311034);
  EXPECT_EQ(small()->tree_count(), 73);
  EXPECT_THROW(Skeleton({5, 3}), Error);
  EXPECT_THROW(Skeleton({4, 4}), Error);
}

TEST(Skeleton, GeneratorsFactorEveryMorphism) {
  const auto sk = small();
  for (int m = 0; m < sk->morphism_count(); ++m) {
    const auto& rec = sk->morphism(m);
    int acc = sk->identity(rec.target);
    for (int g : sk->factor(m)) acc = sk->compose(acc, g);
    EXPECT_EQ(acc, m);
  }
}

TEST(Skeleton, LinearTrees) {
  const auto sk = full();
  EXPECT_EQ(linear_bound(*sk), 4);
  for (int n = 0; n <= 4; ++n) EXPECT_TRUE(sk->tree(sk->linear(n)).is_linear());
  EXPECT_EQ(sk->linear(5), -1);
}

// ---------------------------------------------------------------------------
// dset

TEST(DSet, RepresentableIsHom) {
  const auto sk = small();
  for (const char* text : {"r", "r(a,b)", "r(a(),b(c))", "r(a(b(c)))"}) {
    const Tree t = parse_tree(text);
    auto rep = representable(t, sk);
    const auto census = rep->census();
    for (int r = 0; r < sk->tree_count(); ++r) {
      EXPECT_EQ(rep->size(r), oracle::hom_maps(sk->tree(r), t).size());
      EXPECT_EQ(census[r], injective_count(sk->tree(r), t));
    }
  }
}

TEST(DSet, ActionIsFunctorial) {
  const auto sk = small();
  auto rep = representable(parse_tree("r(a(x,y),b)"), sk);
  for (int g = 0; g < sk->morphism_count(); g += 7) {
    const int t = sk->morphism(g).target;
    for (int f : sk->into(sk->morphism(g).source)) {
      for (Id x = 0; x < rep->size(t); ++x) {
        EXPECT_EQ(rep->act(sk->compose(g, f), x), rep->act(f, rep->act(g, x)));
      }
    }
  }
}

TEST(DSet, BoundaryAndHorns) {
  const auto sk = small();
  const Tree t = parse_tree("r(a,b(c))");
  auto rep = representable(t, sk);
  const auto bd = boundary(rep);
  const auto in = inner_horn(rep, "b");
  std::vector<oracle::FaceTree> all = oracle::face_trees(t), rest;
  for (const auto& f : all) {
    if (!(f.kind == 'i' && f.edge == "b")) rest.push_back(f);
  }
  for (int r = 0; r < sk->tree_count(); ++r) {
    EXPECT_EQ(bd.object->size(r), oracle::union_of_faces(sk->tree(r), t, all).size());
    EXPECT_EQ(in.object->size(r), oracle::union_of_faces(sk->tree(r), t, rest).size());
  }
  EXPECT_TRUE(is_injective(bd.inclusion));
  EXPECT_TRUE(is_natural(in.inclusion));
  // Only the automorphisms of t are missing from the boundary.
  EXPECT_EQ(bd.object->size(sk->locate(t).first),
            rep->size(sk->locate(t).first) - oracle::automorphism_count(t));
  EXPECT_THROW(inner_horn(rep, "a"), Error);
  EXPECT_THROW(outer_horn(representable(corolla(2), sk), "e0"), Error);
}

TEST(DSet, Nerves) {
  const auto sk = small();
  auto c = nerve(comm(), sk);
  for (int t = 0; t < sk->tree_count(); ++t) EXPECT_EQ(c->size(t), 1u);
  auto a = nerve(assoc(), sk);
  EXPECT_EQ(a->size(sk->locate(corolla(3)).first), 6u);
  EXPECT_EQ(a->size(sk->locate(corolla(0)).first), 1u);
}

TEST(DSet, RestrictionOfEmbedding) {
  const auto sk = full();
  const SimplicialSet k = horn(3, 1, 4);
  const SimplicialSet back = restrict(*embed(k, sk));
  for (int n = 0; n <= 4; ++n) EXPECT_EQ(back.size(n), k.size(n));
  EXPECT_EQ(back.census(), k.census());
  auto x = embed(k, sk);
  for (int t = 0; t < sk->tree_count(); ++t) {
    if (!sk->tree(t).is_linear()) EXPECT_EQ(x->size(t), 0u);
  }
}

TEST(DSet, CoproductSizesAdd) {
  const auto sk = small();
  auto a = representable(corolla(2), sk), b = nerve(comm(), sk);
  auto c = coproduct({a, b});
  for (int t = 0; t < sk->tree_count(); ++t) EXPECT_EQ(c->size(t), a->size(t) + b->size(t));
  EXPECT_EQ(coproduct_part(*c, 0, static_cast<Id>(a->size(0))).first, 1);
}

TEST(DSet, YonedaCountsMaps) {
  const auto sk = small();
  auto targets = {nerve(assoc(), sk), representable(parse_tree("r(a,b(c))"), sk), embed(standard_simplex(2, 3), sk)};
  for (const char* shape : {"r", "r(a)", "r(a,b)"}) {
    const Tree s = parse_tree(shape);
    auto rep = representable(s, sk);
    for (const auto& x : targets) {
      MapSearch search(rep, x);
      EXPECT_EQ(search.all().size(), x->size(sk->locate(s).first)) << shape;
    }
  }
  MapSearch lin(representable(linear_tree(1), sk), representable(linear_tree(2), sk));
  EXPECT_EQ(lin.all().size(), 6u);
}

TEST(DSet, UniqueMapFailsWhenAmbiguous) {
  const auto sk = small();
  auto e = representable(eta(), sk);
  EXPECT_NO_THROW(unique_map(e, nerve(comm(), sk)));
  EXPECT_THROW(unique_map(e, representable(corolla(2), sk)), Error);
  EXPECT_THROW(unique_map(representable(corolla(2), sk), e), Error);
}

TEST(DSet, Normality) {
  const auto sk = small();
  auto empty = empty_set(sk);
  for (int t = 0; t < sk->tree_count(); ++t) {
    auto rep = representable(sk->tree(t), sk);
    EXPECT_FALSE(is_normal_mono(empty_map(empty, rep)).has_value());
  }
  const auto w = is_normal_mono(empty_map(empty, nerve(comm(), sk)));
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(sk->tree(w->tree).code(), corolla(2).code());
  auto rep = representable(corolla(2), sk);
  EXPECT_FALSE(is_normal_mono(boundary(rep).inclusion).has_value());
}

// ---------------------------------------------------------------------------
// tensor

TEST(Tensor, LinearShuffleCountsAreBinomial) {
  for (int m = 0; m <= 3; ++m) {
    for (int n = 0; n <= 3; ++n) {
      std::size_t binom = 1;
      for (int i = 0; i < n; ++i) binom = binom * (m + n - i) / (i + 1);
      EXPECT_EQ(shuffles(linear_tree(m), n).size(), binom);
    }
  }
  EXPECT_EQ(shuffles(corolla(2), 1).size(), 2u);
  EXPECT_EQ(shuffles(corolla(0), 1).size(), 2u);
}

TEST(Tensor, SimplexZeroIsUnit) {
  const auto sk = small();
  for (const char* text : {"r", "r(a,b)", "r(a(),b(c))"}) {
    auto rep = representable(parse_tree(text), sk);
    const auto result = tensor_with_simplex(rep, 0);
    EXPECT_EQ(result.result->census(), rep->census());
    for (int t = 0; t < sk->tree_count(); ++t) EXPECT_EQ(result.result->size(t), rep->size(t));
  }
}

TEST(Tensor, EtaTensorIsSimplex) {
  const auto sk = full();
  for (int n = 0; n <= 3; ++n) {
    EXPECT_EQ(tensor_with_simplex(representable(eta(), sk), n).result->census(),
              embed(standard_simplex(n, 4), sk)->census());
  }
}

TEST(Tensor, ProjectionIsNatural) {
  const auto sk = small();
  auto rep = representable(parse_tree("r(a,b)"), sk);
  const auto result = tensor_with_simplex(rep, 1);
  EXPECT_TRUE(is_natural(result.projection));
  const auto horn_part = tensor_with_simplex(inner_horn(representable(parse_tree("r(a(b))"), sk), "a").object, 1);
  EXPECT_TRUE(is_natural(horn_part.projection));
}

TEST(Tensor, OpaqueInputRejected) {
  EXPECT_THROW(tensor_with_simplex(nerve(comm(), small()), 1), Error);
}

TEST(Tensor, MappingSpaceOverEta) {
  const auto sk = full();
  auto e = representable(eta(), sk);
  auto d1 = embed(standard_simplex(1, 4), sk);
  const SimplicialSet m = mapping_space(unique_map(d1, e), unique_map(d1, e), 3);
  EXPECT_EQ(m.census(), (std::vector<std::size_t>{3, 3, 1, 0}));
}

// ---------------------------------------------------------------------------
// fibcheck

TEST(Fibcheck, LiftAgainstBoundaryOfInterval) {
  const auto sk = small();
  auto rep = representable(linear_tree(1), sk);
  auto term = terminal(sk);
  const SubObject bd = boundary(rep);
  MapSearch tops(bd.object, rep);
  std::size_t lifted = 0, total = 0;
  for (const auto& u : tops.all()) {
    ++total;
    LiftingProblem q{bd.inclusion, u, to_terminal(rep, term), to_terminal(rep, term)};
    lifted += has_lift(q).has_value() ? 1 : 0;
  }
  // Endpoint pairs (x, y) lift iff x lies above y in L_1.
  EXPECT_EQ(total, 4u);
  EXPECT_EQ(lifted, 3u);
}

TEST(Fibcheck, TrivialFibrations) {
  const auto sk = small();
  auto term = terminal(sk);
  EXPECT_TRUE(is_trivial_fibration(identity_map(term), 3).pass);
  const auto r = is_trivial_fibration(to_terminal(representable(linear_tree(1), sk), term), 3);
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->clause, "boundary");
}

TEST(Fibcheck, InftyOperads) {
  const auto sk = full();
  EXPECT_TRUE(is_infty_operad(nerve(assoc(), sk), 4).pass);
  EXPECT_TRUE(is_infty_operad(nerve(comm(), sk), 4).pass);
  auto h = inner_horn(representable(linear_tree(2), sk), "1").object;
  const auto r = is_infty_operad(h, 4);
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->clause, "inner-horn");
  EXPECT_EQ(r.witness->tree, "e0(e1(e2))");
}

TEST(Fibcheck, DendroidalKan) {
  const auto sk = small();
  const auto r = is_dendroidal_kan(representable(corolla(2), sk), 3);
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->face, "C_0 leaves");
  EXPECT_THROW(is_dendroidal_kan(nerve(comm(), sk), 4), Error);
}

TEST(Fibcheck, VerdictsAreMonotoneInTheBound) {
  const auto sk = full();
  const std::vector<DSetPtr> xs{nerve(comm(), sk), nerve(assoc(), sk), representable(parse_tree("r(a(b))"), sk),
                                embed(horn(2, 1, 4), sk)};
  for (const auto& x : xs) {
    // A pass at bound b is a pass at every smaller bound.
    bool failed_below = false;
    for (int b = 1; b <= 4; ++b) {
      const bool pass = is_infty_operad(x, b).pass;
      if (failed_below) EXPECT_FALSE(pass);
      failed_below = failed_below || !pass;
    }
  }
}

TEST(Fibcheck, LeftImpliesInner) {
  const auto sk = small();
  auto term = terminal(sk);
  const std::vector<DendrMap> maps{identity_map(term), to_terminal(embed(standard_simplex(0, 3), sk), term),
                                   to_terminal(representable(corolla(2), sk), term),
                                   identity_map(representable(parse_tree("r(a(b))"), sk))};
  for (const auto& p : maps) {
    if (is_left_fibration(p, 3).pass) EXPECT_TRUE(is_inner_fibration(p, 3).pass);
  }
}

TEST(Fibcheck, SimplicialLeftLiftingOfIdentity) {
  const auto sk = full();
  EXPECT_FALSE(simplicial_left_lifting(identity_map(embed(standard_simplex(2, 4), sk)), 4).has_value());
  auto term = terminal(sk);
  EXPECT_TRUE(simplicial_left_lifting(to_terminal(embed(standard_simplex(1, 4), sk), term), 4).has_value());
}

TEST(Fibcheck, AnodyneCounts) {
  EXPECT_EQ(generating_left_anodynes(*Skeleton::shared({2, 2}), 2).size(), 9u);
  EXPECT_EQ(generating_left_anodynes(*small(), 3).size(), 92u);
  EXPECT_THROW(generating_left_anodynes(*small(), 4), Error);
  for (const auto& a : generating_left_anodynes(*Skeleton::shared({2, 2}), 2)) {
    const SubObject s = anodyne_map(Skeleton::shared({2, 2}), a);
    EXPECT_TRUE(is_injective(s.inclusion));
  }
}

// ---------------------------------------------------------------------------
// expressions

TEST(Expr, RoundTrip) {
  for (const char* text : {"eta", "rep(r(a,b))", "ihorn(r(a(b)),a)", "ohorn(r(a,b(c)),b)", "boundary(r(a))",
                           "nerve(comm)", "i!(simplex(2))", "i!(shorn(2,0))", "i!(sboundary(1))",
                           "coprod(eta,nerve(assoc))", "tensor(rep(r(a)),1)"}) {
    EXPECT_EQ(to_string(parse_expr(text)), text);
  }
  EXPECT_EQ(to_string(parse_expr(" tensor( rep(r(a)) , 1 ) ")), "tensor(rep(r(a)),1)");
}

TEST(Expr, Errors) {
  auto kind_of = [](const char* text) {
    try {
      parse_expr(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return std::string("none");
  };
  EXPECT_EQ(kind_of("rep(r(a)"), "syntax");
  EXPECT_EQ(kind_of("tensor(eta)"), "syntax");
  EXPECT_EQ(kind_of("wat(eta)"), "syntax");
  EXPECT_EQ(kind_of("nerve(lie)"), "argument");
  EXPECT_EQ(kind_of("ihorn(r(a),z)"), "argument");
  EXPECT_EQ(kind_of("i!(shorn(1,2))"), "argument");
}

TEST(Expr, OverResolution) {
  const auto sk = small();
  auto h = evaluate("ihorn(r(a(b)),a)", sk);
  auto rep = evaluate("rep(r(a(b)))", sk);
  const DendrMap incl = resolve_over(h, rep);
  EXPECT_TRUE(is_injective(incl));
  auto t = evaluate("tensor(rep(r(a)),1)", sk);
  EXPECT_TRUE(is_natural(resolve_over(t, evaluate("rep(r(a))", sk))));
  auto c = evaluate("nerve(comm)", sk);
  EXPECT_TRUE(is_natural(resolve_over(rep, c)));
  EXPECT_THROW(resolve_over(evaluate("eta", sk), evaluate("rep(r(a,b))", sk)), Error);
}
