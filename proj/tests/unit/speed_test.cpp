#include <gtest/gtest.h>

#include <cmath>

#include "crw/sim.hpp"
#include "crw/speed.hpp"

using namespace crw;

namespace {

FreeProductSpace free_coxeter_space(const std::vector<double>& rates) {
  const auto z2 = cyclic_group(2);
  std::vector<RateAssignment> ra;
  for (double r : rates) ra.push_back(RateAssignment::uniform(z2.generators, r));
  return FreeProductSpace(FreeProductGroup::free_coxeter(rates.size()), ra);
}

SimConfig config(double horizon, std::size_t replicas, std::uint64_t seed) {
  SimConfig c;
  c.horizon = horizon;
  c.replicas = replicas;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(TreeSpeed, ClosedFormValues) {
  EXPECT_NEAR(tree_speed_closed_form(1.0), 1.0, 1e-15);
  EXPECT_EQ(tree_speed_closed_form(0.0), 0.0);
  EXPECT_THROW(tree_speed_closed_form(-1.0), Error);
}

TEST(FreeCoxeterSpeed, EqualUnitRates) {
  const auto sol = free_coxeter_speed(std::vector<double>{1, 1, 1});
  EXPECT_NEAR(sol.root, 0.75, 1e-12);
  EXPECT_NEAR(sol.speed, 1.0, 1e-12);
  EXPECT_NEAR(sol.speed_alt, 1.0, 1e-12);
}

TEST(FreeCoxeterSpeed, AgreesWithTreeFormula) {
  for (double rho : {0.25, 0.5, 1.0, 2.0, 4.0})
    EXPECT_NEAR(free_coxeter_speed(std::vector<double>{rho, 1, 1}).speed, tree_speed_closed_form(rho), 1e-9) << rho;
}

TEST(FreeCoxeterSpeed, Scaling) {
  const std::vector<double> r{0.3, 1.7, 2.2, 5.0};
  const double base = free_coxeter_speed(r).speed;
  for (double c : {0.1, 3.0, 40.0}) {
    std::vector<double> s = r;
    for (auto& v : s) v *= c;
    EXPECT_NEAR(free_coxeter_speed(s).speed, c * base, 1e-9 * std::max(1.0, c));
  }
}

TEST(FreeCoxeterSpeed, Errors) {
  EXPECT_THROW(free_coxeter_speed(std::vector<double>{1, 1}), Error);
  EXPECT_THROW(free_coxeter_speed(std::vector<double>{1, 0, 1}), Error);
}

TEST(FreeCoxeterSpeed, MatchesSimulationForUnequalRates) {
  const std::vector<double> r{0.5, 1.0, 2.0, 3.0};
  const auto est = speed_mc(free_coxeter_space(r), config(400.0, 200, 17));
  EXPECT_NEAR(est.mean, free_coxeter_speed(r).speed, 4 * est.standard_error);
}

TEST(FreeCoxeterSpeed, GridMonotonicity) {
  const auto rows = speed_grid_scan(3, {0.5, 1, 2, 4});
  ASSERT_EQ(rows.size(), 64u);
  for (const auto& row : rows)
    for (double d : row.forward_difference)
      if (std::isfinite(d)) {
        EXPECT_GE(d, -1e-9);
        EXPECT_GT(d, 1e-6);
      }
}

TEST(ProductSpeed, TreeTimesTree) {
  const auto tree = free_coxeter_space({1, 1, 1});
  const auto est = speed_mc(ProductSpace(tree, tree), config(300.0, 100, 2));
  const auto rep = product_speed_check(1.0, 0.0, 1.0, 0.0, est);
  EXPECT_TRUE(rep.passed) << rep.difference << " band " << rep.band;
  EXPECT_NEAR(rep.expected, 2.0, 0.0);
}

TEST(ProductSpeed, FiniteFactorDoesNotChangeSpeed) {
  const auto tree = free_coxeter_space({2, 1, 1});
  const auto s4 = symmetric_group(4);
  const CayleySpace finite(s4.cayley(), RateAssignment::uniform(s4.generators, 1.0));
  const auto est = speed_mc(ProductSpace(tree, finite), config(300.0, 100, 5));
  const auto rep = product_speed_check(tree_speed_closed_form(2.0), 0.0, 0.0, 0.0, est);
  EXPECT_TRUE(rep.passed) << rep.difference << " band " << rep.band;
}

TEST(ProductSpeed, BothFinite) {
  const auto d5 = dihedral_group(5);
  const CayleySpace a(d5.cayley(), RateAssignment::uniform(d5.generators, 1.0));
  const auto est = speed_mc(ProductSpace(a, a), config(1000.0, 20, 5));
  EXPECT_LT(est.mean, 0.011);
}
