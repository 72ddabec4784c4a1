#pragma once

// Escape speeds on free Coxeter groups (trees) and the additivity check
// for direct products.

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "crw/error.hpp"
#include "crw/sim.hpp"

namespace crw {

/// Speed of the walk on the 3-regular tree with one generator at rate rho
/// and the other two at rate 1.
inline double tree_speed_closed_form(double rho) {
  detail::require(rho >= 0.0 && std::isfinite(rho), ErrorKind::InvalidArgument, "rate must be nonnegative");
  return (3.0 * rho * (rho + 1.0) + (1.0 - rho) * std::sqrt(16.0 * rho + 9.0 * rho * rho)) / (2.0 * (2.0 + rho));
}

struct SpeedSolution {
  double root = 0.0;      // positive solution y of the defining equation
  double speed = 0.0;     // sigma, first form
  double speed_alt = 0.0; // sigma, second form
  double residual = 0.0;  // |F(y)|
  int iterations = 0;
};

namespace detail {

inline double free_coxeter_equation(std::span<const double> rates, double y) {
  double sum = 0.0;
  for (double r : rates) sum += std::hypot(y, r) - r;
  return sum - static_cast<double>(rates.size() - 2) * y;
}

}  // namespace detail

/// Speed of the walk on the free product of p >= 3 copies of Z/2 with the
/// given rates. The root y > 0 of sum(sqrt(y^2 + r_i^2) - r_i) = (p - 2) y
/// is found by bisection; F is convex with F(0) = 0, F'(0) < 0 and
/// F(y) -> +inf, so the positive root is unique.
inline SpeedSolution free_coxeter_speed(std::span<const double> rates) {
  detail::require(rates.size() >= 3, ErrorKind::InvalidArgument, "need at least three rates");
  for (double r : rates)
    detail::require(r > 0.0 && std::isfinite(r), ErrorKind::InvalidArgument, "rates must be positive");

  const double total = std::accumulate(rates.begin(), rates.end(), 0.0);
  double lo = 1e-12 * total;
  double hi = total * static_cast<double>(rates.size());
  auto f = [&](double y) { return detail::free_coxeter_equation(rates, y); };
  if (!(f(lo) < 0.0 && f(hi) > 0.0))
    throw Error(ErrorKind::BracketFailure, "speed equation root is not bracketed");

  SpeedSolution sol;
  while (hi - lo > 1e-13 * std::max(1.0, hi) && sol.iterations < 400) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
    ++sol.iterations;
  }
  const double y = 0.5 * (lo + hi);
  sol.root = y;
  sol.residual = std::abs(f(y));

  double first = 0.0, second = 0.0;
  for (double r : rates) {
    const double h = std::hypot(y, r);
    first += r * (h - r);
    second += r * y / (h + r);
  }
  sol.speed = first / y;
  sol.speed_alt = second;
  if (std::abs(sol.speed - sol.speed_alt) > 1e-9)
    throw Error(ErrorKind::BracketFailure, "speed forms disagree at the computed root");
  return sol;
}

inline SpeedSolution free_coxeter_speed(const std::vector<double>& rates) {
  return free_coxeter_speed(std::span<const double>(rates));
}

struct ProductSpeedReport {
  double expected = 0.0;   // sigma_1 + sigma_2
  double estimate = 0.0;   // product estimate
  double band = 0.0;       // 4 combined standard errors
  double difference = 0.0; // estimate - expected
  bool passed = false;
};

/// |sigma_product - (sigma_1 + sigma_2)| within 4 combined standard errors.
/// Exact factor speeds are passed with se = 0.
inline ProductSpeedReport product_speed_check(double speed1, double se1, double speed2, double se2,
                                              const SpeedEstimate& product) {
  ProductSpeedReport r;
  r.expected = speed1 + speed2;
  r.estimate = product.mean;
  r.band = 4.0 * std::sqrt(se1 * se1 + se2 * se2 + product.standard_error * product.standard_error);
  r.difference = r.estimate - r.expected;
  r.passed = std::abs(r.difference) <= r.band;
  return r;
}

inline ProductSpeedReport product_speed_check(const SpeedEstimate& a, const SpeedEstimate& b,
                                              const SpeedEstimate& product) {
  return product_speed_check(a.mean, a.standard_error, b.mean, b.standard_error, product);
}

/// Finite differences of the speed over a rate grid.
struct SpeedGridRow {
  std::vector<double> rates;
  double speed = 0.0;
  std::vector<double> forward_difference;  // per coordinate, to the next grid value (NaN at the top)
  std::vector<double> second_difference;   // per coordinate, NaN where undefined
};

inline std::vector<SpeedGridRow> speed_grid_scan(std::size_t p, const std::vector<double>& grid) {
  detail::require(p >= 3, ErrorKind::InvalidArgument, "need at least three generators");
  detail::require(!grid.empty(), ErrorKind::InvalidArgument, "grid must be nonempty");
  std::vector<std::size_t> idx(p, 0);
  std::vector<SpeedGridRow> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto rates_at = [&](const std::vector<std::size_t>& at) {
    std::vector<double> r(p);
    for (std::size_t i = 0; i < p; ++i) r[i] = grid[at[i]];
    return r;
  };
  while (true) {
    SpeedGridRow row;
    row.rates = rates_at(idx);
    row.speed = free_coxeter_speed(row.rates).speed;
    for (std::size_t i = 0; i < p; ++i) {
      double fd = nan, sd = nan;
      if (idx[i] + 1 < grid.size()) {
        auto up = idx;
        ++up[i];
        const double s_up = free_coxeter_speed(rates_at(up)).speed;
        fd = s_up - row.speed;
        if (idx[i] > 0) {
          auto down = idx;
          --down[i];
          const double s_down = free_coxeter_speed(rates_at(down)).speed;
          const double h1 = grid[idx[i]] - grid[idx[i] - 1], h2 = grid[idx[i] + 1] - grid[idx[i]];
          sd = 2.0 * ((s_up - row.speed) / h2 - (row.speed - s_down) / h1) / (h1 + h2);
        }
      }
      row.forward_difference.push_back(fd);
      row.second_difference.push_back(sd);
    }
    rows.push_back(std::move(row));
    std::size_t k = 0;
    while (k < p && ++idx[k] == grid.size()) idx[k++] = 0;
    if (k == p) break;
  }
  return rows;
}

}  // namespace crw
