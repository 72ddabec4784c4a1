#pragma once

// Walks on the ray {0, 1, 2, ...} and on windows of Z with arbitrary edge
// rates: exact profiles, certified monotonicity checks, the hitting-time
// spectrum of the killed Laplacian, and the two-sided line experiments.
//
// The certified checks run the uniformization series in 240-digit MPFR
// arithmetic, since profile values and rate sensitivities at far states are
// many orders of magnitude below double-precision resolution.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/mpfr.hpp>

#include "crw/ctmc.hpp"
#include "crw/error.hpp"

namespace crw {

using HighPrecision =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<240>, boost::multiprecision::et_off>;

/// Truncation tolerance of the certified series.
inline constexpr double kCertifiedTol = 1e-200;
/// A strict inequality is certified when the error bound is below this
/// fraction of the quantity being signed.
inline constexpr double kRelativeMargin = 1e-12;

/// Rates r_1, r_2, ... with r_i on the edge (i - 1, i). Edges past the list
/// carry `tail` (0 makes the ray finite).
struct RayRates {
  std::vector<double> rates;
  double tail = 0.0;

  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

  void validate() const {
    for (double r : rates)
      detail::require(r >= 0.0 && std::isfinite(r), ErrorKind::InvalidArgument, "ray rates must be nonnegative");
    detail::require(tail >= 0.0 && std::isfinite(tail), ErrorKind::InvalidArgument, "tail rate must be nonnegative");
  }

  /// r_i for i >= 1.
  double rate(std::size_t i) const { return i <= rates.size() ? rates[i - 1] : tail; }

  /// First edge index with zero rate, or kUnbounded.
  std::size_t first_zero() const {
    for (std::size_t i = 0; i < rates.size(); ++i)
      if (rates[i] == 0.0) return i + 1;
    return tail == 0.0 ? rates.size() + 1 : kUnbounded;
  }

  double max_rate() const {
    double m = tail;
    for (double r : rates) m = std::max(m, r);
    return m;
  }
};

/// Path 0..last with the ray's rates.
inline RateGraph ray_graph(const RayRates& rates, std::size_t last) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= last; ++i) edges.push_back({i - 1, i, rates.rate(i)});
  return RateGraph(last + 1, edges);
}

/// p_t(0, .) on the ray. Finite rays are solved on their reachable states;
/// otherwise the window doubles until the last state carries less than tol.
inline Distribution ray_distribution(const RayRates& rates, double t, double tol = kDefaultTol) {
  rates.validate();
  detail::check_tol(tol);
  const std::size_t i0 = rates.first_zero();
  if (i0 != RayRates::kUnbounded) {
    const auto reach = transition_distribution(ray_graph(rates, i0 - 1), 0, t, tol);
    std::vector<double> p(std::max(rates.rates.size() + 1, i0), 0.0);
    std::copy(reach.values().begin(), reach.values().end(), p.begin());
    return Distribution(std::move(p), 10 * tol + 1e-12);
  }
  std::size_t last = std::max<std::size_t>(4 * static_cast<std::size_t>(std::ceil(t * rates.max_rate())),
                                           rates.rates.size() + 5);
  while (true) {
    auto d = transition_distribution(ray_graph(rates, last), 0, t, tol);
    if (d[last] < tol) return d;
    detail::require(last < (std::size_t{1} << 22), ErrorKind::ToleranceUnachievable,
                    "ray truncation did not converge");
    last *= 2;
  }
}

namespace detail {

inline std::size_t certified_last_state(const RayRates& rates) {
  rates.validate();
  const std::size_t i0 = rates.first_zero();
  require(i0 != RayRates::kUnbounded, ErrorKind::InvalidArgument, "certified ray checks need a zero rate or a zero tail");
  return i0 - 1;
}

inline std::vector<HighPrecision> certified_profile(const RayRates& rates, std::size_t last, double t) {
  std::vector<HighPrecision> init(last + 1, HighPrecision(0));
  init[0] = 1;
  return uniformized<HighPrecision>(ray_graph(rates, last), std::move(init), t, kCertifiedTol,
                                    SeriesKind::Transition);
}

/// Error bound of a difference of two certified series values.
inline double certified_error() { return 4.0 * kCertifiedTol; }

inline bool certified_positive(const HighPrecision& v) {
  return v > 0 && HighPrecision(certified_error()) <= HighPrecision(kRelativeMargin) * v;
}

}  // namespace detail

struct ProfileReport {
  std::size_t first_zero = 0;    // i0
  double t = 0.0;
  std::size_t checked = 0;       // number of i with 1 <= i < i0
  double min_relative_gap = 0.0; // min over i of (p(i-1) - p(i)) / p(i-1)
  std::size_t worst_index = 0;
  std::vector<double> profile;
  bool passed = false;
};

/// p_t(0, i - 1) > p_t(0, i) for 1 <= i < i0, certified: each gap must
/// exceed 1e-12 of p_t(0, i - 1) and dominate the series error bound.
inline ProfileReport profile_checks(const RayRates& rates, double t) {
  detail::require(t > 0.0, ErrorKind::InvalidArgument, "time must be positive");
  const std::size_t last = detail::certified_last_state(rates);
  const auto p = detail::certified_profile(rates, last, t);
  ProfileReport r;
  r.first_zero = last + 1;
  r.t = t;
  r.passed = true;
  r.min_relative_gap = std::numeric_limits<double>::infinity();
  for (const auto& v : p) r.profile.push_back(static_cast<double>(v));
  for (std::size_t i = 1; i <= last; ++i) {
    const HighPrecision gap = p[i - 1] - p[i];
    const double rel = p[i - 1] > 0 ? static_cast<double>(gap / p[i - 1]) : 0.0;
    ++r.checked;
    if (rel < r.min_relative_gap) {
      r.min_relative_gap = rel;
      r.worst_index = i;
    }
    if (!(rel > kRelativeMargin && detail::certified_positive(gap))) r.passed = false;
  }
  if (r.checked == 0) r.min_relative_gap = 0.0;
  return r;
}

struct SensitivityReport {
  std::size_t edge = 0;  // j
  double delta = 0.0;
  std::vector<double> cdf_delta;       // P[Z <= i] change, i = 0..i0-2
  double expected_distance_delta = 0.0;
  double min_relative_change = 0.0;    // min over i of |cdf change| / P[Z > i]
  bool cdf_strict = false;
  bool distance_strict = false;
  bool passed() const { return cdf_strict && distance_strict; }
};

/// Effect of r_j -> r_j + delta on the distance CDF and on E|Z_t|. The CDF
/// is checked for i < i0 - 1 (at i0 - 1 it is identically 1). Changes are
/// computed from tail sums in high precision and certified against the
/// series error bound.
inline SensitivityReport rate_sensitivity(const RayRates& rates, double t, std::size_t j, double delta) {
  detail::require(t > 0.0, ErrorKind::InvalidArgument, "time must be positive");
  detail::require(delta >= 0.0 && std::isfinite(delta), ErrorKind::InvalidArgument, "delta must be nonnegative");
  const std::size_t last = detail::certified_last_state(rates);
  detail::require(j >= 1 && j <= last, ErrorKind::InvalidArgument, "edge index must satisfy 1 <= j < i0");

  RayRates raised = rates;
  if (raised.rates.size() < j) raised.rates.resize(j, raised.tail);
  raised.rates[j - 1] += delta;
  const auto before = detail::certified_profile(rates, last, t);
  const auto after = detail::certified_profile(raised, last, t);

  SensitivityReport r;
  r.edge = j;
  r.delta = delta;
  r.cdf_strict = true;
  r.min_relative_change = std::numeric_limits<double>::infinity();
  HighPrecision tail_before(0), tail_after(0), distance(0);
  std::vector<HighPrecision> tail_delta(last + 1, HighPrecision(0));
  std::vector<HighPrecision> tail_mass(last + 1, HighPrecision(0));
  for (std::size_t i = last + 1; i-- > 0;) {
    tail_delta[i] = tail_after - tail_before;  // change of P[Z > i]
    tail_mass[i] = tail_before;
    tail_before += before[i];
    tail_after += after[i];
  }
  for (std::size_t i = 0; i < last; ++i) {
    distance += tail_delta[i];
    const HighPrecision change = -tail_delta[i];
    r.cdf_delta.push_back(static_cast<double>(change));
    const double rel = tail_mass[i] > 0 ? static_cast<double>(tail_delta[i] / tail_mass[i]) : 0.0;
    r.min_relative_change = std::min(r.min_relative_change, rel);
    if (!detail::certified_positive(tail_delta[i])) r.cdf_strict = false;
  }
  if (last == 0) {
    r.cdf_strict = true;
    r.min_relative_change = 0.0;
  }
  r.expected_distance_delta = static_cast<double>(distance);
  r.distance_strict = detail::certified_positive(distance);
  return r;
}

// ---------------------------------------------------------------------------
// Hitting-time spectrum

/// Ascending eigenvalues of the Laplacian restricted to {0, ..., n - 1}
/// with state n absorbing. The hitting time of n from 0 is distributed as a
/// sum of independent exponentials with these rates.
inline std::vector<double> km_spectrum(const std::vector<double>& rates, std::size_t n) {
  detail::require(n >= 1, ErrorKind::InvalidArgument, "n must be positive");
  detail::require(rates.size() >= n, ErrorKind::InvalidArgument, "need at least n rates");
  for (std::size_t i = 0; i < n; ++i)
    detail::require(rates[i] > 0.0 && std::isfinite(rates[i]), ErrorKind::InvalidArgument,
                    "spectrum needs positive rates");
  // With symmetric edge rates the killed Laplacian is already symmetric.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    diag[static_cast<Eigen::Index>(i)] = (i > 0 ? rates[i - 1] : 0.0) + rates[i];
    if (i + 1 < n) sub[static_cast<Eigen::Index>(i)] = -rates[i];
  }
  if (n == 1) return {diag[0]};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  detail::require(solver.info() == Eigen::Success, ErrorKind::InvalidArgument, "eigensolver did not converge");
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(out.begin(), out.end());
  return out;
}

/// E[exp(-theta T)] for T a sum of independent Exp(lambda_i).
inline double km_laplace(const std::vector<double>& spectrum, double theta) {
  double prod = 1.0;
  for (double l : spectrum) prod *= l / (l + theta);
  return prod;
}

struct KmMonotonicityReport {
  std::vector<double> before;
  std::vector<double> after;
  double min_difference = 0.0;  // min over i of after[i] - before[i]
  std::vector<double> thetas;
  std::vector<double> laplace_before;
  std::vector<double> laplace_after;
  bool passed = false;
};

/// Ascending eigenvalues weakly increase under r_j -> r_j + delta.
inline KmMonotonicityReport km_monotonicity(const std::vector<double>& rates, std::size_t n, std::size_t j,
                                            double delta, const std::vector<double>& thetas = {0.1, 1.0, 10.0}) {
  detail::require(j >= 1 && j <= n, ErrorKind::InvalidArgument, "edge index must satisfy 1 <= j <= n");
  detail::require(delta >= 0.0, ErrorKind::InvalidArgument, "delta must be nonnegative");
  KmMonotonicityReport r;
  r.before = km_spectrum(rates, n);
  auto raised = rates;
  raised[j - 1] += delta;
  r.after = km_spectrum(raised, n);
  r.min_difference = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) r.min_difference = std::min(r.min_difference, r.after[i] - r.before[i]);
  r.passed = r.min_difference >= -1e-10;
  r.thetas = thetas;
  for (double th : thetas) {
    r.laplace_before.push_back(km_laplace(r.before, th));
    r.laplace_after.push_back(km_laplace(r.after, th));
    if (r.laplace_after.back() < r.laplace_before.back() - 1e-10) r.passed = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Two-sided lines

/// Window [leftmost, leftmost + rates.size()] of Z; rates[m] sits on the
/// edge between leftmost + m and leftmost + m + 1. Walks start at 0.
struct LineRates {
  std::int64_t leftmost = 0;
  std::vector<double> rates;

  std::size_t vertex_count() const { return rates.size() + 1; }
  std::size_t index_of(std::int64_t v) const {
    detail::require(v >= leftmost && v <= leftmost + static_cast<std::int64_t>(rates.size()),
                    ErrorKind::InvalidArgument, "vertex outside the window");
    return static_cast<std::size_t>(v - leftmost);
  }
  std::int64_t vertex_at(std::size_t i) const { return leftmost + static_cast<std::int64_t>(i); }

  RateGraph graph() const {
    std::vector<Edge> edges;
    for (std::size_t m = 0; m < rates.size(); ++m) edges.push_back({m, m + 1, rates[m]});
    return RateGraph(vertex_count(), edges);
  }
};

inline Distribution line_distribution(const LineRates& line, double t, double tol = kDefaultTol) {
  return transition_distribution(line.graph(), line.index_of(0), t, tol);
}

inline double line_expected_distance(const LineRates& line, std::span<const double> p) {
  double e = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) e += static_cast<double>(std::llabs(line.vertex_at(i))) * p[i];
  return e;
}

struct LineExperimentConfig {
  std::vector<double> t_grid;  // defaults to 0.1, 0.2, ..., 5
  double left_rate_high = 3.0;
  double left_rate_low = 2.0;
  std::size_t n = 200;
  double alpha = std::numbers::sqrt2 - 1.0;
  double fast_rate = 1e7;
  double small_time = 0.01;
  double tol = kDefaultTol;
};

struct LineExperimentReport {
  // (a) three-state line -1, 0, 1 with rates (r0, 1)
  std::vector<double> t_grid;
  std::vector<double> p00_high;  // r0 = left_rate_high
  std::vector<double> p00_low;   // r0 = left_rate_low
  std::vector<double> violation_times;
  // (b) k unit edges to the left of 0, n - 1 fast edges to the right
  std::size_t n = 0;
  std::size_t k = 0;
  double small_time_distance = 0.0;
  double large_time_distance = 0.0;  // stationary (uniform) expectation
  double large_time_formula = 0.0;
  double ratio = 0.0;
  double target_ratio = (1.0 + std::numbers::sqrt2) / 2.0;
  double relative_error = 0.0;
  bool passed() const { return !violation_times.empty() && relative_error <= 0.02; }
};

inline LineExperimentReport line_experiments(LineExperimentConfig cfg = {}) {
  if (cfg.t_grid.empty())
    for (int i = 1; i <= 50; ++i) cfg.t_grid.push_back(0.1 * i);
  detail::require(cfg.n >= 2, ErrorKind::InvalidArgument, "n must be at least 2");
  LineExperimentReport r;
  r.t_grid = cfg.t_grid;
  const LineRates high{-1, {cfg.left_rate_high, 1.0}};
  const LineRates low{-1, {cfg.left_rate_low, 1.0}};
  for (double t : cfg.t_grid) {
    const double a = line_distribution(high, t, cfg.tol)[1];
    const double b = line_distribution(low, t, cfg.tol)[1];
    r.p00_high.push_back(a);
    r.p00_low.push_back(b);
    if (a > b + kStrictMargin) r.violation_times.push_back(t);
  }

  r.n = cfg.n;
  r.k = static_cast<std::size_t>(std::llround(cfg.alpha * static_cast<double>(cfg.n)));
  LineRates regime{-static_cast<std::int64_t>(r.k), std::vector<double>(r.k, 1.0)};
  regime.rates.insert(regime.rates.end(), cfg.n - 1, cfg.fast_rate);
  const auto d = line_distribution(regime, cfg.small_time, cfg.tol);
  r.small_time_distance = line_expected_distance(regime, d.values());
  const std::vector<double> uniform(regime.vertex_count(), 1.0 / static_cast<double>(regime.vertex_count()));
  r.large_time_distance = line_expected_distance(regime, uniform);
  const double n = static_cast<double>(cfg.n), k = static_cast<double>(r.k);
  r.large_time_formula = (n * (n - 1.0) + k * (k + 1.0)) / (2.0 * (n + k));
  r.ratio = r.small_time_distance / r.large_time_distance;
  r.relative_error = std::abs(r.ratio - r.target_ratio) / r.target_ratio;
  return r;
}

}  // namespace crw
