#include <gtest/gtest.h>

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "crw/checks.hpp"
#include "crw/ctmc.hpp"

using namespace crw;

namespace {

// exp(tQ) by scaling and squaring with Pade approximants.
Eigen::MatrixXd dense_kernel(const RateGraph& g, double t) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      if (i != j) {
        q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g.rate(i, j);
        q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -= g.rate(i, j);
      }
  return (t * q).exp();
}

RateGraph two_state(double r) { return RateGraph(2, {{0, 1, r}}); }

RateGraph star(const std::vector<double>& leaf_rates) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < leaf_rates.size(); ++i) e.push_back({0, i + 1, leaf_rates[i]});
  return RateGraph(leaf_rates.size() + 1, e);
}

}  // namespace

TEST(Transition, TimeZeroIsPointMass) {
  const auto g = RateGraph::from_cayley(dihedral_group(5).cayley(), RateAssignment::uniform(dihedral_group(5).generators, 2.0));
  const auto d = transition_distribution(g, 3, 0.0);
  for (std::size_t x = 0; x < d.size(); ++x) EXPECT_EQ(d[x], x == 3 ? 1.0 : 0.0);
}

TEST(Transition, TwoStateAnalytic) {
  for (double t : {0.01, 0.3, 1.0, 4.0, 20.0}) {
    const auto d = transition_distribution(two_state(1.0), 0, t);
    EXPECT_NEAR(d[0], (1 + std::exp(-2 * t)) / 2, 1e-12);
    EXPECT_NEAR(d[1], (1 - std::exp(-2 * t)) / 2, 1e-12);
  }
}

TEST(Transition, MatchesDenseExponential) {
  const auto s4 = symmetric_group(4);
  CounterRng rng(7, 0);
  const auto rates = random_rates(s4.generators, rng, 0.3, 4.0);
  const auto g = RateGraph::from_cayley(s4.cayley(), rates);
  for (double t : {0.1, 1.0, 6.0}) {
    const auto k = dense_kernel(g, t);
    const auto d = transition_distribution(g, 5, t);
    for (std::size_t x = 0; x < d.size(); ++x) EXPECT_NEAR(d[x], k(5, static_cast<Eigen::Index>(x)), 1e-11);
  }
}

TEST(Transition, Errors) {
  const auto g = two_state(1.0);
  EXPECT_THROW(transition_distribution(g, 0, -1.0), Error);
  EXPECT_THROW(transition_distribution(g, 0, 1.0, 0.0), Error);
  EXPECT_THROW(transition_distribution(g, 0, 1.0, 1e-3), Error);
  EXPECT_THROW(transition_distribution(g, 2, 1.0), Error);
}

TEST(Transition, SymmetricKernel) {
  const auto d7 = dihedral_group(7);
  const auto g = RateGraph::from_cayley(d7.cayley(), RateAssignment(d7.generators, {0.7, 2.9}));
  for (std::size_t x = 0; x < g.size(); ++x) {
    const auto px = transition_distribution(g, x, 0.8);
    for (std::size_t y = 0; y < g.size(); ++y) EXPECT_NEAR(px[y], transition_distribution(g, y, 0.8)[x], 1e-12);
  }
}

TEST(Transition, MajorizedLaterInTime) {
  const auto s4 = symmetric_group(4);
  const auto g = RateGraph::from_cayley(s4.cayley(), RateAssignment(s4.generators, {1.0, 0.2, 3.0}));
  auto prev = transition_distribution(g, 0, 0.0);
  for (double t : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    const auto d = transition_distribution(g, 0, t);
    EXPECT_NE(majorizes(prev, d, 1e-12).verdict, Majorization::Incomparable) << t;
    prev = d;
  }
}

TEST(Metrics, UniformAndPointMass) {
  const auto u = Distribution::uniform(6);
  for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) EXPECT_NEAR(stationarity_metrics(u, p).lp, 0.0, 1e-15);
  EXPECT_NEAR(stationarity_metrics(u, 1.0).entropy, std::log(6.0), 1e-15);
  EXPECT_NEAR(stationarity_metrics(u, 1.0).hellinger, 0.0, 1e-15);
  const auto pm = Distribution::point_mass(6, 2);
  EXPECT_NEAR(stationarity_metrics(pm, 1.0).lp, 2.0 * (1.0 - 1.0 / 6.0), 1e-15);
  EXPECT_NEAR(stationarity_metrics(pm, kInf).lp, 5.0 / 6.0, 1e-15);
  EXPECT_EQ(stationarity_metrics(pm, 1.0).entropy, 0.0);
  EXPECT_THROW(lp_distance_to_uniform(pm.values(), 0.5), Error);
}

TEST(Metrics, NonIntegerP) {
  const std::vector<double> d{0.5, 0.3, 0.2, 0.0};
  double s = 0.0;
  for (double v : d) s += std::pow(std::abs(v - 0.25), 1.7);
  EXPECT_NEAR(lp_distance_to_uniform(d, 1.7), std::pow(s, 1.0 / 1.7), 1e-15);
}

TEST(Metrics, StarMeanEntropy) {
  // mean over starts, with the dense kernel as oracle
  for (double r : {10.0, 20.0}) {
    const auto g = star({r, 1, 1, 1, 1});
    const auto k = dense_kernel(g, 1.0);
    double oracle = 0.0;
    for (Eigen::Index x = 0; x < 6; ++x) {
      std::vector<double> row(6);
      for (Eigen::Index y = 0; y < 6; ++y) row[static_cast<std::size_t>(y)] = k(x, y);
      oracle += entropy(row) / 6.0;
    }
    double mean = 0.0;
    for (std::size_t x = 0; x < 6; ++x) mean += entropy(transition_distribution(g, x, 1.0).values()) / 6.0;
    EXPECT_NEAR(mean, oracle, 1e-10);
  }
}

TEST(Majorization, Examples) {
  const auto pm = Distribution::point_mass(4, 0);
  const Distribution g({0.4, 0.3, 0.2, 0.1});
  EXPECT_EQ(majorizes(pm, g, 1e-12).verdict, Majorization::StrictlyMajorizes);
  EXPECT_EQ(majorizes(pm, Distribution::point_mass(4, 3), 1e-12).verdict, Majorization::WeaklyMajorizes);
  EXPECT_EQ(majorizes(g, g, 1e-12).verdict, Majorization::WeaklyMajorizes);
  EXPECT_EQ(majorizes(g, Distribution::uniform(4), 1e-12).verdict, Majorization::StrictlyMajorizes);
  EXPECT_EQ(majorizes(Distribution::uniform(4), g, 1e-12).verdict, Majorization::Incomparable);
  const Distribution a({0.5, 0.25, 0.25, 0.0}), b({0.4, 0.4, 0.1, 0.1});
  EXPECT_EQ(majorizes(a, b, 1e-12).verdict, Majorization::Incomparable);
  EXPECT_EQ(majorizes(b, a, 1e-12).verdict, Majorization::Incomparable);
}

TEST(Majorization, ImpliesMetricOrder) {
  CounterRng rng(3, 3);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> f(6), g(6);
    for (auto& v : f) v = rng.uniform();
    for (auto& v : g) v = rng.uniform();
    const double sf = std::accumulate(f.begin(), f.end(), 0.0), sg = std::accumulate(g.begin(), g.end(), 0.0);
    for (auto& v : f) v /= sf;
    for (auto& v : g) v /= sg;
    if (majorizes(f, g, 0.0).verdict == Majorization::Incomparable) continue;
    ++checked;
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.0, kInf})
      EXPECT_GE(lp_distance_to_uniform(f, p), lp_distance_to_uniform(g, p) - 1e-14);
    EXPECT_LE(entropy(f), entropy(g) + 1e-14);
  }
  EXPECT_GT(checked, 5);
}

TEST(Refresh, PointMassAndIdempotence) {
  const auto cg = symmetric_group(3).cayley();
  const auto pairing = generator_pairing(cg, 0);
  const auto once = refresh_operator(Distribution::point_mass(6, 0), pairing);
  EXPECT_EQ(once[0], 0.5);
  EXPECT_EQ(once[cg.neighbor(0, 0)], 0.5);
  const auto twice = refresh_operator(once, pairing);
  for (std::size_t x = 0; x < 6; ++x) EXPECT_EQ(once[x], twice[x]);
}

TEST(Refresh, RejectsNonInvolutions) {
  const auto z = cyclic_group(5);
  EXPECT_THROW(generator_pairing(z.cayley(), 0), Error);
  EXPECT_THROW(refresh_operator(Distribution::uniform(3), std::vector<Element>{1, 2, 0}), Error);
}

TEST(DiscreteCoins, S3TwoGenerators) {
  const auto s3 = symmetric_group(3);
  const auto cg = s3.cayley();
  const auto d = discrete_coin_distribution(cg, std::vector<std::string>{"s1", "s2"});
  const auto a = s3.generators[0].element, b = s3.generators[1].element;
  for (Element x : {Element{0}, a, b, s3.group.multiply(a, b)}) EXPECT_DOUBLE_EQ(d[x], 0.25);
  EXPECT_EQ(discrete_coin_distribution(cg, std::vector<std::string>{})[0], 1.0);
}

TEST(DiscreteCoins, BruteForceOnS4) {
  const auto s4 = symmetric_group(4);
  const auto cg = s4.cayley();
  const std::vector<std::string> seq{"s1", "s2", "s1", "s3", "s2"};
  std::vector<double> oracle(24, 0.0);
  for (unsigned bits = 0; bits < (1u << seq.size()); ++bits) {
    Element x = 0;
    for (std::size_t i = 0; i < seq.size(); ++i)
      if (bits >> i & 1u) x = s4.group.multiply(x, s4.generators[s4.generators.index_of(seq[i])].element);
    oracle[x] += 1.0 / 32.0;
  }
  const auto d = discrete_coin_distribution(cg, seq);
  for (std::size_t x = 0; x < 24; ++x) EXPECT_DOUBLE_EQ(d[x], oracle[x]);
}

TEST(DiscreteCoins, RedundantLetterGivesEqualLaws) {
  // (s, s) against its proper subsequence (s): the refresh operator is idempotent
  const auto cg = symmetric_group(4).cayley();
  const auto full = discrete_coin_distribution(cg, std::vector<std::string>{"s1", "s1"});
  const auto sub = discrete_coin_distribution(cg, std::vector<std::string>{"s1"});
  EXPECT_EQ(majorizes(sub, full, 1e-12).verdict, Majorization::WeaklyMajorizes);
  // commuting letters: s1 s3 s1 equals s1 s3
  const auto a = discrete_coin_distribution(cg, std::vector<std::string>{"s1", "s3", "s1"});
  const auto b = discrete_coin_distribution(cg, std::vector<std::string>{"s1", "s3"});
  EXPECT_EQ(majorizes(b, a, 1e-12).verdict, Majorization::WeaklyMajorizes);
}

TEST(DiscreteCoins, WeakMajorizationSuite) {
  DiscreteSuiteConfig cfg;
  cfg.strict = false;
  const auto rep = discrete_majorization_suite(coxeter_group(CoxeterMatrix::type_a(3)), cfg);
  EXPECT_TRUE(rep.passed()) << rep.first_failure;
}

TEST(DiscreteCoins, StrictWhenDeletedLetterMatters) {
  const auto cg = symmetric_group(4).cayley();
  const auto full = discrete_coin_distribution(cg, std::vector<std::string>{"s1", "s2", "s3"});
  const auto sub = discrete_coin_distribution(cg, std::vector<std::string>{"s1", "s3"});
  EXPECT_EQ(majorizes(sub, full, 1e-12).verdict, Majorization::StrictlyMajorizes);
}

TEST(TimedRefresh, NoInsertionsMatchesTransition) {
  const auto d5 = dihedral_group(5);
  const auto g = RateGraph::from_cayley(d5.cayley(), RateAssignment(d5.generators, {1.0, 2.0}));
  const auto a = timed_refresh_distribution(g, 0, 1.3, {});
  const auto b = transition_distribution(g, 0, 1.3);
  for (std::size_t x = 0; x < a.size(); ++x) EXPECT_NEAR(a[x], b[x], 1e-12);
}

TEST(TimedRefresh, EarlyInsertionIsRefreshOfStart) {
  const auto g = two_state(1.0);
  const double t = 1e-8;
  const auto d = timed_refresh_distribution(g, 0, t, {{t / 2, swap_pairing(2, 0, 1)}});
  EXPECT_NEAR(d[0], 0.5, 1e-7);
  EXPECT_THROW(timed_refresh_distribution(g, 0, 1.0, {{0.5, swap_pairing(2, 0, 1)}, {0.4, swap_pairing(2, 0, 1)}}),
               Error);
}

TEST(TimedRefresh, InsertionPushesOutwardOnTreeBall) {
  // ball of radius 4 in the 3-regular tree, vertices = reduced words over {0,1,2}
  std::vector<std::vector<int>> words{{}};
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].size() == 4) continue;
    for (int s = 0; s < 3; ++s)
      if (words[i].empty() || words[i].back() != s) {
        auto w = words[i];
        w.push_back(s);
        words.push_back(w);
      }
  }
  const auto find = [&](const std::vector<int>& w) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < words.size(); ++i)
      if (words[i] == w) return i;
    return std::nullopt;
  };
  const auto times_gen = [&](std::size_t x, int s) {
    auto w = words[x];
    if (!w.empty() && w.back() == s)
      w.pop_back();
    else
      w.push_back(s);
    return find(w);
  };
  std::vector<Edge> edges;
  for (std::size_t x = 0; x < words.size(); ++x)
    for (int s = 0; s < 3; ++s)
      if (auto y = times_gen(x, s); y && x < *y) edges.push_back({x, *y, 1.0});
  const RateGraph g(words.size(), edges);
  std::vector<Element> pairing(words.size());
  for (std::size_t x = 0; x < words.size(); ++x) pairing[x] = static_cast<Element>(times_gen(x, 0).value_or(x));

  const double t = 0.7;
  const auto plain = transition_distribution(g, 0, t);
  const auto refreshed = timed_refresh_distribution(g, 0, t, {{0.3, pairing}});
  double cp = 0.0, cr = 0.0;
  for (std::size_t k = 0; k <= 4; ++k) {
    for (std::size_t x = 0; x < words.size(); ++x)
      if (words[x].size() == k) {
        cp += plain[x];
        cr += refreshed[x];
      }
    EXPECT_LE(cr, cp + 1e-12) << "radius " << k;
  }
}

TEST(Survival, EmptyForbiddenAndTwoState) {
  const auto g = two_state(1.7);
  const auto free = restricted_survival(g, std::vector<std::size_t>{}, 0, 0.9);
  const auto d = transition_distribution(g, 0, 0.9);
  EXPECT_NEAR(free.mass[0], d[0], 1e-12);
  EXPECT_NEAR(free.cemetery, 0.0, 1e-12);
  const auto killed = restricted_survival(g, std::vector<std::size_t>{1}, 0, 0.9);
  EXPECT_NEAR(killed.mass[0], std::exp(-1.7 * 0.9), 1e-12);
  EXPECT_NEAR(killed.cemetery, 1.0 - std::exp(-1.7 * 0.9), 1e-12);
  EXPECT_THROW(restricted_survival(g, std::vector<std::size_t>{0}, 0, 1.0), Error);
}

TEST(Survival, WallRingReflectionIdentity) {
  for (const auto& m : {CoxeterMatrix::dihedral(5), CoxeterMatrix::type_a(3)}) {
    const auto rep = reflection_principle_suite(coxeter_group(m), {0.5, 2.0}, 2, 1, 1e-9, kDefaultTol, WallTime::WallRing);
    EXPECT_TRUE(rep.passed()) << rep.first_failure;
  }
}

TEST(Survival, FirstEntranceFallsShortOfTwiceTheFarMass) {
  // a jump across a wall lands beyond it, so the first-entrance time is
  // strictly later than the wall-ring time
  const auto real = coxeter_group(CoxeterMatrix::dihedral(5));
  const auto cg = real.cayley();
  const auto rates = RateAssignment::uniform(real.generators(), 1.0);
  const auto g = RateGraph::from_cayley(cg, rates);
  const auto d = transition_distribution(g, 0, 0.5);
  for (const auto& w : all_walls(cg)) {
    const auto far = w.minus_side();
    const std::vector<std::size_t> forbidden(far.begin(), far.end());
    double there = 0.0;
    for (auto x : far) there += d[x];
    EXPECT_LT(restricted_survival(g, forbidden, 0, 0.5).cemetery, 2.0 * there - 1e-3);
  }
}

TEST(Laplace, Examples) {
  const auto g = two_state(2.5);
  EXPECT_EQ(hitting_laplace(g, std::vector<std::size_t>{0}, 0, 1.0), 1.0);
  EXPECT_NEAR(hitting_laplace(g, std::vector<std::size_t>{1}, 0, 0.7), 2.5 / 3.2, 1e-14);
  const RateGraph split(3, {{0, 1, 1.0}});
  EXPECT_THROW(hitting_laplace(split, std::vector<std::size_t>{2}, 0, 1.0), Error);
  EXPECT_THROW(hitting_laplace(g, std::vector<std::size_t>{1}, 0, 0.0), Error);
}

TEST(Occupation, TwoStateAnalytic) {
  const auto g = two_state(1.0);
  EXPECT_EQ(expected_occupation(g, 0, 0, 0.0), 0.0);
  for (double t : {0.2, 1.0, 5.0}) {
    EXPECT_NEAR(expected_occupation(g, 0, 0, t), t / 2 + (1 - std::exp(-2 * t)) / 4, 1e-11);
  }
}

TEST(Occupation, SumsToElapsedTime) {
  const auto d5 = dihedral_group(5);
  const auto g = RateGraph::from_cayley(d5.cayley(), RateAssignment(d5.generators, {0.4, 3.0}));
  const auto occ = expected_occupation_all(g, 2, 2.5);
  EXPECT_NEAR(std::accumulate(occ.begin(), occ.end(), 0.0), 2.5, 1e-10);
}

TEST(Pinf, IdentitiesOnVertexTransitiveGraphs) {
  const auto s4 = symmetric_group(4);
  const auto g = RateGraph::from_cayley(s4.cayley(), RateAssignment(s4.generators, {1.3, 0.4, 2.2}));
  for (double t : {0.2, 1.0, 5.0}) {
    const auto d = transition_distribution(g, 0, t);
    const auto d2 = transition_distribution(g, 0, 2 * t);
    EXPECT_NEAR(lp_distance_to_uniform(d.values(), kInf), d[0] - 1.0 / 24, 1e-12);
    const double l2 = lp_distance_to_uniform(d.values(), 2.0);
    EXPECT_NEAR(l2 * l2, d2[0] - 1.0 / 24, 1e-12);
  }
}

TEST(Pinf, SmallSuite) {
  PinfSuiteConfig cfg;
  cfg.trials = 10;
  const auto rep = pinf_suite(cfg);
  EXPECT_TRUE(rep.monotone.passed()) << rep.monotone.first_failure;
  EXPECT_TRUE(rep.identities.passed()) << rep.identities.first_failure;
}

TEST(CoxeterMonotonicity, SmallSuiteOnI25) {
  CoxeterSuiteConfig cfg;
  cfg.instances = 3;
  cfg.rate_min = 2.3;
  cfg.rate_max = 2.7;
  const auto [bruhat, major] = coxeter_monotonicity_suite(coxeter_group(CoxeterMatrix::dihedral(5)), cfg);
  EXPECT_TRUE(bruhat.passed()) << bruhat.first_failure;
  EXPECT_TRUE(major.passed()) << major.first_failure;
}

TEST(CoxeterMonotonicity, AdjacentProbabilitiesOnB3) {
  const auto real = coxeter_group(CoxeterMatrix::type_b(3));
  const auto cg = real.cayley();
  const auto g = RateGraph::from_cayley(cg, RateAssignment(real.generators(), {0.8, 1.9, 1.2}));
  const auto d = transition_distribution(g, 0, 1.0);
  for (Element w = 0; w < cg.order(); ++w)
    for (std::size_t s = 0; s < cg.generators().size(); ++s) {
      const Element v = cg.neighbor(w, s);
      if (cg.distance(w) < cg.distance(v)) {
        EXPECT_GT(d[w], d[v]);
      }
    }
}
