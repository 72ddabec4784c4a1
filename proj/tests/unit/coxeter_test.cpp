#include <gtest/gtest.h>

#include "crw/coxeter.hpp"

using namespace crw;

namespace {

// Tableau criterion for Bruhat order on S_n in one-line notation.
bool tableau_leq(const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::uint32_t k = 0; k < n; ++k) {
      std::size_t cx = 0, cy = 0;
      for (std::size_t j = 0; j <= i; ++j) {
        cx += x[j] >= k;
        cy += y[j] >= k;
      }
      if (cx > cy) return false;
    }
  return true;
}

}  // namespace

TEST(CoxeterGroup, SmallRealizations) {
  EXPECT_EQ(coxeter_group(CoxeterMatrix::type_a(1)).system.group.order(), 2u);
  EXPECT_EQ(coxeter_group(CoxeterMatrix::dihedral(5)).system.group.order(), 10u);
  EXPECT_EQ(coxeter_group(CoxeterMatrix::type_a(3)).system.group.order(), 24u);
  EXPECT_EQ(coxeter_group(CoxeterMatrix::type_b(3)).system.group.order(), 48u);
  EXPECT_EQ(coxeter_group(CoxeterMatrix::type_d(4)).system.group.order(), 192u);
  const auto prod = CoxeterMatrix::product(CoxeterMatrix::type_a(1), CoxeterMatrix::dihedral(4));
  EXPECT_EQ(coxeter_group(prod).system.group.order(), 16u);
}

TEST(CoxeterGroup, DefiningRelations) {
  for (const auto& m : {CoxeterMatrix::type_b(3), CoxeterMatrix::type_d(4), CoxeterMatrix::dihedral(7)}) {
    const auto real = coxeter_group(m);
    const auto& g = real.system.group;
    const auto& gens = real.generators();
    for (std::size_t i = 0; i < m.rank(); ++i)
      for (std::size_t j = 0; j < m.rank(); ++j) {
        const Element st = g.multiply(gens[i].element, gens[j].element);
        EXPECT_EQ(detail::element_order(g, st), i == j ? 1u : m(i, j));
      }
  }
}

TEST(CoxeterGroup, PermutedMatrixIsRecognised) {
  // B_3 with the rank-4 bond moved to the far end of the path
  const CoxeterMatrix m({{1, 3, 2}, {3, 1, 4}, {2, 4, 1}});
  EXPECT_EQ(coxeter_group(m).system.group.order(), 48u);
}

TEST(CoxeterGroup, UnsupportedTypes) {
  const CoxeterMatrix h3({{1, 5, 2}, {5, 1, 3}, {2, 3, 1}});
  const CoxeterMatrix affine({{1, 3, 3}, {3, 1, 3}, {3, 3, 1}});
  const CoxeterMatrix infinite({{1, CoxeterMatrix::kInfinity}, {CoxeterMatrix::kInfinity, 1}});
  for (const auto& m : {h3, affine, infinite}) {
    try {
      coxeter_group(m);
      ADD_FAILURE() << "expected UnsupportedType";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::UnsupportedType);
    }
  }
}

TEST(Reflections, Counts) {
  EXPECT_EQ(reflections(coxeter_group(CoxeterMatrix::type_a(1))).size(), 1u);
  EXPECT_EQ(reflections(coxeter_group(CoxeterMatrix::type_a(3))).size(), 6u);
  EXPECT_EQ(reflections(coxeter_group(CoxeterMatrix::dihedral(5))).size(), 5u);
  EXPECT_EQ(reflections(coxeter_group(CoxeterMatrix::type_b(3))).size(), 9u);
}

TEST(Reflections, AreTranspositionsInS4) {
  const auto real = coxeter_group(CoxeterMatrix::type_a(3));
  for (auto r : reflections(real)) {
    const auto& img = real.system.group.permutation(r).images();
    std::size_t moved = 0;
    for (std::size_t i = 0; i < img.size(); ++i) moved += img[i] != i;
    EXPECT_EQ(moved, 2u);
  }
}

TEST(Walls, SingleEdgeInZ2) {
  const auto cg = coxeter_group(CoxeterMatrix::type_a(1)).cayley();
  const auto w = wall_of_edge(cg, 0, 0);
  EXPECT_EQ(w.edges.size(), 1u);
  EXPECT_TRUE(w.on_identity_side(0));
  EXPECT_FALSE(w.on_identity_side(1));
}

TEST(Walls, S3EdgeHasOnePartner) {
  const auto cg = coxeter_group(CoxeterMatrix::dihedral(3)).cayley();
  const auto w = wall_of_edge(cg, 0, 0);
  EXPECT_EQ(w.edges.size(), 2u);
  const auto& g = cg.group();
  for (Element x = 0; x < cg.order(); ++x) EXPECT_NE(w.side[x], w.side[g.multiply(w.reflection, x)]);
}

TEST(Walls, ReflectionSwapsSidesAndLengthCriterion) {
  for (const auto& m : {CoxeterMatrix::dihedral(6), CoxeterMatrix::type_a(3), CoxeterMatrix::type_b(3)}) {
    const auto cg = coxeter_group(m).cayley();
    const auto& g = cg.group();
    for (const auto& w : all_walls(cg)) {
      EXPECT_EQ(g.multiply(w.reflection, w.reflection), 0u);
      for (Element v = 0; v < cg.order(); ++v) {
        const Element lv = g.multiply(w.reflection, v);
        ASSERT_NE(w.side[v], w.side[lv]);
        ASSERT_EQ(cg.distance(v) < cg.distance(lv), w.on_identity_side(v));
      }
    }
  }
}

TEST(Bruhat, IdentityIsBottom) {
  const auto real = coxeter_group(CoxeterMatrix::type_b(3));
  const BruhatOrder order(real.cayley());
  for (Element x = 0; x < real.system.group.order(); ++x) EXPECT_TRUE(order.leq(0, x));
}

TEST(Bruhat, S3ComparablePairs) {
  const BruhatOrder order(symmetric_group(3).cayley());
  EXPECT_EQ(order.strict_pairs().size(), 13u);
}

TEST(Bruhat, MatchesTableauCriterionOnS4) {
  const auto s4 = symmetric_group(4);
  const BruhatOrder order(s4.cayley());
  const auto& g = s4.group;
  for (Element x = 0; x < g.order(); ++x)
    for (Element y = 0; y < g.order(); ++y)
      ASSERT_EQ(order.leq(x, y), tableau_leq(g.permutation(x).images(), g.permutation(y).images()))
          << g.describe(x) << " vs " << g.describe(y);
}

TEST(Bruhat, LongestElementIsUniqueMaximum) {
  const auto cg = coxeter_group(CoxeterMatrix::dihedral(5)).cayley();
  const BruhatOrder order(cg);
  std::vector<Element> maxima;
  for (Element x = 0; x < cg.order(); ++x) {
    bool top = true;
    for (Element y = 0; y < cg.order(); ++y) top = top && !order.less(x, y);
    if (top) maxima.push_back(x);
  }
  ASSERT_EQ(maxima.size(), 1u);
  EXPECT_EQ(cg.distance(maxima[0]), 5u);
}

TEST(Bruhat, StrictPairsIncreaseLength) {
  const auto cg = coxeter_group(CoxeterMatrix::type_b(3)).cayley();
  const BruhatOrder order(cg);
  for (auto [x, y] : order.strict_pairs()) ASSERT_LT(cg.distance(x), cg.distance(y));
  // generator edges are comparable in the direction of the metric
  for (Element v = 0; v < cg.order(); ++v)
    for (std::size_t s = 0; s < cg.generators().size(); ++s) {
      const Element w = cg.neighbor(v, s);
      EXPECT_EQ(order.less(v, w), cg.distance(v) < cg.distance(w));
    }
}

TEST(WallAxioms, CatalogueSamples) {
  for (const auto& m : {CoxeterMatrix::type_a(1), CoxeterMatrix::dihedral(7), CoxeterMatrix::type_b(3)}) {
    const auto rep = verify_wall_axioms(coxeter_group(m));
    EXPECT_TRUE(rep.passed()) << rep.name;
    EXPECT_TRUE(rep.bipartite);
  }
}

TEST(WallAxioms, NonCoxeterGeneratorsFail) {
  // Z/8 with +-1, +-2, +-3 has odd cycles
  const auto rep = verify_wall_axioms(cyclic_group(8, {1, 2, 3}).cayley(), "Z8");
  EXPECT_FALSE(rep.passed());
}

TEST(WallAxioms, TooLarge) {
  try {
    verify_wall_axioms(coxeter_group(CoxeterMatrix::type_a(5)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooLarge);
  }
}
