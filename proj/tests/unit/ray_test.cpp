#include <gtest/gtest.h>

#include <cmath>

#include "crw/ray.hpp"

using namespace crw;

namespace {

// Laplace transform of the hitting time of n from 0, by first-step
// recursion on the birth-death chain.
double hitting_laplace(const std::vector<double>& r, std::size_t n, double theta) {
  double prod = 1.0, prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? r[i - 1] : 0.0;
    const double phi = r[i] / (left + r[i] + theta - left * prev);
    prod *= phi;
    prev = phi;
  }
  return prod;
}

RayRates ones(std::size_t n) { return RayRates{std::vector<double>(n, 1.0), 0.0}; }

}  // namespace

TEST(RayDistribution, TimeZeroIsPointMass) {
  const auto d = ray_distribution(RayRates{{1, 2, 3}, 1.0}, 0.0);
  EXPECT_EQ(d[0], 1.0);
  for (std::size_t i = 1; i < d.size(); ++i) EXPECT_EQ(d[i], 0.0);
}

TEST(RayDistribution, ZeroSecondRateIsTwoState) {
  for (double t : {0.1, 0.7, 3.0}) {
    const auto d = ray_distribution(RayRates{{1, 0, 5}, 2.0}, t);
    EXPECT_NEAR(d[0], (1 + std::exp(-2 * t)) / 2, 1e-12);
    EXPECT_NEAR(d[1], (1 - std::exp(-2 * t)) / 2, 1e-12);
    for (std::size_t i = 2; i < d.size(); ++i) EXPECT_EQ(d[i], 0.0);
  }
}

TEST(RayDistribution, InfiniteRayTruncatesAndSumsToOne) {
  const auto d = ray_distribution(RayRates{{}, 1.0}, 4.0);
  double sum = 0.0;
  for (double v : d.values()) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-10);
  EXPECT_LT(d[d.size() - 1], 1e-12);
}

TEST(RayDistribution, Rejections) {
  EXPECT_THROW(ray_distribution(RayRates{{1, -1}, 0.0}, 1.0), Error);
  EXPECT_THROW(ray_distribution(RayRates{{1}, NAN}, 1.0), Error);
}

TEST(RayProfile, DecreasingOnUnitRay) {
  for (double t : {0.05, 1.0, 10.0}) {
    const auto rep = profile_checks(ones(30), t);
    EXPECT_TRUE(rep.passed) << t;
    EXPECT_EQ(rep.first_zero, 31u);
    EXPECT_EQ(rep.checked, 30u);
    EXPECT_GT(rep.min_relative_gap, 0.0);
  }
}

TEST(RayProfile, StopsAtFirstZero) {
  const auto rep = profile_checks(RayRates{{4.0, 0.5, 0.0, 7.0}, 1.0}, 2.0);
  EXPECT_EQ(rep.first_zero, 3u);
  EXPECT_EQ(rep.checked, 2u);
  EXPECT_TRUE(rep.passed);
}

TEST(RayProfile, NeedsFiniteRay) {
  EXPECT_THROW(profile_checks(RayRates{{1, 2}, 1.0}, 1.0), Error);
  EXPECT_THROW(profile_checks(ones(3), 0.0), Error);
}

TEST(RaySensitivity, RaisingARateSpreadsMass) {
  for (std::size_t j : {1u, 10u, 30u}) {
    const auto rep = rate_sensitivity(ones(30), 2.0, j, 0.5);
    EXPECT_TRUE(rep.passed()) << j;
    EXPECT_GT(rep.expected_distance_delta, 0.0);
    for (double c : rep.cdf_delta) EXPECT_LT(c, 0.0);
  }
}

TEST(RaySensitivity, ZeroDeltaIsNotStrict) {
  const auto rep = rate_sensitivity(RayRates{{1, 2, 3, 0}, 0.0}, 1.0, 2, 0.0);
  EXPECT_FALSE(rep.passed());
  for (double c : rep.cdf_delta) EXPECT_EQ(c, 0.0);
}

TEST(RaySensitivity, MatchesDoubleDifference) {
  const RayRates base{{1, 2, 3, 0}, 0.0};
  RayRates raised = base;
  raised.rates[1] += 0.25;
  const double t = 0.8;
  const auto a = ray_distribution(base, t), b = ray_distribution(raised, t);
  double ea = 0, eb = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    ea += i * a[i];
    eb += i * b[i];
  }
  const auto rep = rate_sensitivity(base, t, 2, 0.25);
  EXPECT_NEAR(rep.expected_distance_delta, eb - ea, 1e-12);
  EXPECT_NEAR(rep.cdf_delta[0], b[0] - a[0], 1e-12);
}

TEST(RaySensitivity, EdgeIndexRange) {
  EXPECT_THROW(rate_sensitivity(RayRates{{1, 1, 0}, 0.0}, 1.0, 3, 0.1), Error);
  EXPECT_THROW(rate_sensitivity(RayRates{{1, 1, 0}, 0.0}, 1.0, 0, 0.1), Error);
  EXPECT_THROW(rate_sensitivity(RayRates{{1, 1, 0}, 0.0}, 1.0, 1, -0.1), Error);
}

TEST(HittingSpectrum, SmallCases) {
  const auto one = km_spectrum({2.5}, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0], 2.5, 1e-14);
  const auto two = km_spectrum({1, 1}, 2);
  EXPECT_NEAR(two[0], (3 - std::sqrt(5.0)) / 2, 1e-13);
  EXPECT_NEAR(two[1], (3 + std::sqrt(5.0)) / 2, 1e-13);
  EXPECT_THROW(km_spectrum({1, 0}, 2), Error);
  EXPECT_THROW(km_spectrum({1}, 2), Error);
}

TEST(HittingSpectrum, LaplaceMatchesFirstStepRecursion) {
  const std::vector<double> r{1, 2, 3, 0.5, 4};
  for (std::size_t n = 1; n <= r.size(); ++n) {
    const auto spec = km_spectrum(r, n);
    for (double th : {0.01, 0.3, 1.0, 7.0})
      EXPECT_NEAR(km_laplace(spec, th), hitting_laplace(r, n, th), 1e-12) << n << " " << th;
  }
}

TEST(HittingSpectrum, MeanMatchesSumOfReciprocals) {
  // E[T] = sum over edges i of (i states to the left) / r_i
  const std::vector<double> r{1, 2, 3};
  const auto spec = km_spectrum(r, 3);
  double mean = 0.0;
  for (double l : spec) mean += 1.0 / l;
  EXPECT_NEAR(mean, 1.0 / 1 + 2.0 / 2 + 3.0 / 3, 1e-12);
}

TEST(HittingSpectrum, Monotonicity) {
  const auto rep = km_monotonicity({1, 2, 3}, 3, 2, 0.5);
  EXPECT_TRUE(rep.passed);
  EXPECT_GE(rep.min_difference, 0.0);
  for (std::size_t i = 0; i < rep.thetas.size(); ++i) EXPECT_GE(rep.laplace_after[i], rep.laplace_before[i]);
  EXPECT_THROW(km_monotonicity({1, 2, 3}, 3, 4, 0.5), Error);
}

TEST(Line, ThreeStateAnalytic) {
  // unit path on three vertices: the middle sees only the modes 0 and 3
  const LineRates line{-1, {1.0, 1.0}};
  for (double t : {0.2, 1.0, 4.0}) {
    const auto d = line_distribution(line, t);
    EXPECT_NEAR(d[1], 1.0 / 3 + 2.0 / 3 * std::exp(-3 * t), 1e-12);
    EXPECT_NEAR(d[0], d[2], 1e-14);
  }
  EXPECT_THROW(line.index_of(2), Error);
}

TEST(Line, Experiments) {
  const auto rep = line_experiments();
  EXPECT_TRUE(rep.passed());
  EXPECT_FALSE(rep.violation_times.empty());
  EXPECT_EQ(rep.k, 83u);
  EXPECT_NEAR(rep.large_time_distance, rep.large_time_formula, 1e-9);
  EXPECT_LE(rep.relative_error, 0.02);
}
