#pragma once

// Exact computations for continuous-time walks on finite weighted graphs.
//
// Transition probabilities use uniformization: with lambda >= max exit rate
// and P = I + Q / lambda,
//
//   p_t(x, .) = sum_k Poisson(lambda t)(k) * delta_x P^k.
//
// The series is cut where a geometric bound on the Poisson tail drops below
// the requested tolerance. All terms are nonnegative, so the computed
// probabilities never go negative and the truncation error is one-sided.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "crw/error.hpp"
#include "crw/group.hpp"

namespace crw {

inline constexpr double kDefaultTol = 1e-12;
/// lambda = kUniformizationSlack * (max total exit rate).
inline constexpr double kUniformizationSlack = 1.05;
/// Differences below this are not treated as strict.
inline constexpr double kStrictMargin = 1e-9;
inline constexpr std::size_t kMaxSeriesTerms = 50'000'000;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  double rate = 0.0;
};

/// Undirected graph with nonnegative edge rates; parallel edges are merged.
class RateGraph {
 public:
  RateGraph() = default;

  RateGraph(std::size_t n, std::vector<Edge> edges) : n_(n) {
    for (auto& e : edges) {
      detail::require(e.a < n && e.b < n, ErrorKind::InvalidArgument, "edge endpoint out of range");
      detail::require(e.a != e.b, ErrorKind::InvalidArgument, "self-loops are not allowed");
      detail::require(e.rate >= 0.0 && std::isfinite(e.rate), ErrorKind::InvalidArgument,
                      "edge rates must be finite and nonnegative");
      if (e.a > e.b) std::swap(e.a, e.b);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
      return std::pair(x.a, x.b) < std::pair(y.a, y.b);
    });
    for (const auto& e : edges) {
      if (!edges_.empty() && edges_.back().a == e.a && edges_.back().b == e.b)
        edges_.back().rate += e.rate;
      else
        edges_.push_back(e);
    }

    std::vector<std::size_t> degree(n_, 0);
    for (const auto& e : edges_) {
      if (e.rate == 0.0) continue;
      ++degree[e.a];
      ++degree[e.b];
    }
    offset_.assign(n_ + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) offset_[i + 1] = offset_[i] + degree[i];
    nbr_.resize(offset_[n_]);
    rate_.resize(offset_[n_]);
    exit_.assign(n_, 0.0);
    std::vector<std::size_t> fill(offset_.begin(), offset_.end() - 1);
    for (const auto& e : edges_) {
      if (e.rate == 0.0) continue;
      nbr_[fill[e.a]] = static_cast<std::uint32_t>(e.b);
      rate_[fill[e.a]++] = e.rate;
      nbr_[fill[e.b]] = static_cast<std::uint32_t>(e.a);
      rate_[fill[e.b]++] = e.rate;
      exit_[e.a] += e.rate;
      exit_[e.b] += e.rate;
    }
  }

  /// Walk on a Cayley graph: from x, jump to x s at rate r_s for every s.
  static RateGraph from_cayley(const CayleyGraph& cg, const RateAssignment& rates) {
    const auto& gens = cg.generators();
    detail::require(rates.size() == gens.size(), ErrorKind::InvalidArgument,
                    "rate assignment does not match the generating set");
    std::vector<Edge> edges;
    for (Element x = 0; x < cg.order(); ++x) {
      for (std::size_t s = 0; s < gens.size(); ++s) {
        const Element y = cg.neighbor(x, s);
        // (x, xs) via s and (xs, x) via s^-1 are one edge with rate r_s.
        const bool owner = gens.is_involution(s) ? x < y : s < gens[s].inverse;
        if (owner) edges.push_back({x, y, rates[s]});
      }
    }
    return RateGraph(cg.order(), std::move(edges));
  }

  std::size_t size() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  double exit_rate(std::size_t i) const { return exit_[i]; }
  double max_exit_rate() const { return exit_.empty() ? 0.0 : *std::max_element(exit_.begin(), exit_.end()); }

  std::span<const std::uint32_t> neighbors(std::size_t i) const {
    return {nbr_.data() + offset_[i], offset_[i + 1] - offset_[i]};
  }
  std::span<const double> neighbor_rates(std::size_t i) const {
    return {rate_.data() + offset_[i], offset_[i + 1] - offset_[i]};
  }

  /// Rate between i and j (0 when not adjacent).
  double rate(std::size_t i, std::size_t j) const {
    auto nb = neighbors(i);
    auto rt = neighbor_rates(i);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (nb[k] == j) return rt[k];
    return 0.0;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offset_;
  std::vector<std::uint32_t> nbr_;
  std::vector<double> rate_;
  std::vector<double> exit_;
};

/// Probability vector over the states of a chain.
class Distribution {
 public:
  Distribution() = default;

  explicit Distribution(std::vector<double> p, double tol = 1e-9) : p_(std::move(p)) {
    detail::require(!p_.empty(), ErrorKind::InvalidArgument, "empty distribution");
    double total = 0.0;
    for (double v : p_) {
      detail::require(v >= 0.0 && std::isfinite(v), ErrorKind::InvalidArgument,
                      "distribution entries must be finite and nonnegative");
      total += v;
    }
    detail::require(std::abs(total - 1.0) <= tol, ErrorKind::InvalidArgument,
                    "distribution sums to " + std::to_string(total));
  }

  static Distribution point_mass(std::size_t n, std::size_t at) {
    std::vector<double> p(n, 0.0);
    p.at(at) = 1.0;
    return Distribution(std::move(p));
  }

  static Distribution uniform(std::size_t n) {
    return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& values() const noexcept { return p_; }
  auto begin() const noexcept { return p_.begin(); }
  auto end() const noexcept { return p_.end(); }

  double sum() const { return std::accumulate(p_.begin(), p_.end(), 0.0); }

 private:
  std::vector<double> p_;
};

namespace detail {

inline double log_poisson(double mu, std::size_t k) {
  return -mu + static_cast<double>(k) * std::log(mu) - std::lgamma(static_cast<double>(k) + 1.0);
}

/// log of a bound on P[N > k] for N ~ Poisson(mu), valid once k + 2 > mu.
inline double log_poisson_tail(double mu, std::size_t k) {
  const double ratio = mu / (static_cast<double>(k) + 2.0);
  return log_poisson(mu, k + 1) - std::log1p(-ratio);
}

/// Smallest K >= mu for which the Poisson tail beyond K, inflated by
/// `weight(K)`, is below tol.
inline std::size_t poisson_cutoff(double mu, double tol, const std::function<double(std::size_t)>& log_weight) {
  std::size_t k = static_cast<std::size_t>(std::ceil(mu)) + 1;
  const double log_tol = std::log(tol);
  while (log_poisson_tail(mu, k) + log_weight(k) >= log_tol) {
    ++k;
    require(k <= kMaxSeriesTerms, ErrorKind::ToleranceUnachievable,
            "uniformization series needs more than " + std::to_string(kMaxSeriesTerms) + " terms");
  }
  return k;
}

/// Poisson(mu) probabilities for k = 0..last, computed by recurrence from
/// the mode and normalised over the window.
template <class T>
std::vector<T> poisson_weights(double mu, std::size_t last) {
  std::vector<T> w(last + 1, T(0));
  if (mu == 0.0) {
    w[0] = T(1);
    return w;
  }
  const std::size_t mode = std::min(last, static_cast<std::size_t>(std::floor(mu)));
  const T m(mu);
  w[mode] = T(1);
  for (std::size_t k = mode + 1; k <= last; ++k) w[k] = w[k - 1] * m / T(static_cast<double>(k));
  for (std::size_t k = mode; k-- > 0;) {
    w[k] = w[k + 1] * T(static_cast<double>(k + 1)) / m;
    if constexpr (std::is_floating_point_v<T>) {
      if (w[k] < std::numeric_limits<T>::min()) {
        std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k) + 1, T(0));
        break;
      }
    }
  }
  T total(0);
  for (const auto& v : w) total += v;
  for (auto& v : w) v /= total;
  return w;
}

/// out = in * P with P = I + Q / lambda. States flagged in `killed` are
/// absorbing into a cemetery: they hold no mass and mass sent there is lost.
template <class T>
void uniform_step(const RateGraph& g, double lambda, const std::vector<char>* killed, const std::vector<T>& in,
                  std::vector<T>& out) {
  const std::size_t n = g.size();
  const T inv_lambda = T(1) / T(lambda);
  for (std::size_t x = 0; x < n; ++x) {
    if (killed && (*killed)[x]) {
      out[x] = T(0);
      continue;
    }
    // The holding probability is formed in T so rows sum to one at T's precision.
    T stay(1);
    T acc(0);
    auto nb = g.neighbors(x);
    auto rt = g.neighbor_rates(x);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const T move = T(rt[k]) * inv_lambda;
      stay -= move;
      if (killed && (*killed)[nb[k]]) continue;
      acc += in[nb[k]] * move;
    }
    out[x] = acc + in[x] * stay;
  }
}

enum class SeriesKind { Transition, Occupation };

/// sum_k c_k * (init P^k): c_k is the Poisson pmf for transition
/// probabilities, or P[N > k] / lambda for integrated occupation.
template <class T>
std::vector<T> uniformized(const RateGraph& g, std::vector<T> init, double t, double tol, SeriesKind kind,
                           const std::vector<char>* killed = nullptr) {
  require(t >= 0.0 && std::isfinite(t), ErrorKind::InvalidArgument, "time must be finite and nonnegative");
  require(tol > 0.0, ErrorKind::InvalidArgument, "tolerance must be positive");
  require(init.size() == g.size(), ErrorKind::InvalidArgument, "initial vector has the wrong length");
  const double max_exit = g.max_exit_rate();
  if (t == 0.0 || max_exit == 0.0) {
    if (kind == SeriesKind::Transition) return init;
    for (auto& v : init) v *= T(t);
    return init;
  }
  const double lambda = kUniformizationSlack * max_exit;
  const double mu = lambda * t;

  std::size_t last = 0;
  if (kind == SeriesKind::Transition) {
    last = poisson_cutoff(mu, tol, [](std::size_t) { return 0.0; });
  } else {
    // sum_{k > K} P[N > k] <= tail(K) * (1 + 1 / (1 - mu / (K + 3))), plus the
    // tail mass missing from each kept coefficient: (K + 1) * tail(K).
    last = poisson_cutoff(mu, tol * lambda, [mu](std::size_t k) {
      const double geo = 1.0 / (1.0 - mu / (static_cast<double>(k) + 3.0));
      return std::log(static_cast<double>(k) + 2.0 + geo);
    });
  }
  const auto w = poisson_weights<T>(mu, last);

  std::vector<T> coeff(last + 1);
  if (kind == SeriesKind::Transition) {
    coeff = w;
  } else {
    T suffix(0);
    for (std::size_t k = last + 1; k-- > 0;) {
      coeff[k] = suffix / T(lambda);  // P[N > k] over the window
      suffix += w[k];
    }
  }

  std::vector<T> result(g.size(), T(0));
  std::vector<T> scratch(g.size());
  for (std::size_t k = 0; k <= last; ++k) {
    if (coeff[k] != T(0))
      for (std::size_t x = 0; x < g.size(); ++x) result[x] += coeff[k] * init[x];
    if (k == last) break;
    uniform_step(g, lambda, killed, init, scratch);
    std::swap(init, scratch);
  }
  return result;
}

inline std::vector<double> clamp_nonnegative(std::vector<double> v) {
  for (auto& x : v) x = std::max(x, 0.0);
  return v;
}

inline void check_tol(double tol) {
  require(tol > 0.0 && tol <= 1e-6, ErrorKind::InvalidArgument, "tolerance must lie in (0, 1e-6]");
}

}  // namespace detail

/// p_t(start, .) with total truncation error at most `tol`.
inline Distribution transition_distribution(const RateGraph& g, std::size_t start, double t,
                                            double tol = kDefaultTol) {
  detail::check_tol(tol);
  detail::require(start < g.size(), ErrorKind::InvalidArgument, "start state out of range");
  std::vector<double> init(g.size(), 0.0);
  init[start] = 1.0;
  return Distribution(detail::uniformized(g, std::move(init), t, tol, detail::SeriesKind::Transition), 10 * tol + 1e-9);
}

/// Evolves an arbitrary initial distribution for time t.
inline Distribution evolve(const RateGraph& g, const Distribution& init, double t, double tol = kDefaultTol) {
  detail::check_tol(tol);
  return Distribution(detail::uniformized(g, init.values(), t, tol, detail::SeriesKind::Transition), 10 * tol + 1e-9);
}

// ---------------------------------------------------------------------------
// Distances to stationarity

struct StationarityMetrics {
  double p = 1.0;
  double lp = 0.0;
  double linf = 0.0;
  double entropy = 0.0;
  double hellinger = 0.0;
};

/// l^p distance to the uniform distribution; p = kInf gives the max norm.
inline double lp_distance_to_uniform(std::span<const double> d, double p) {
  detail::require(p >= 1.0, ErrorKind::InvalidArgument, "p must be at least 1");
  const double u = 1.0 / static_cast<double>(d.size());
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : d) m = std::max(m, std::abs(v - u));
    return m;
  }
  double s = 0.0;
  if (p == 1.0) {
    for (double v : d) s += std::abs(v - u);
    return s;
  }
  if (p == 2.0) {
    for (double v : d) s += (v - u) * (v - u);
    return std::sqrt(s);
  }
  for (double v : d) s += std::pow(std::abs(v - u), p);
  return std::pow(s, 1.0 / p);
}

/// Natural-log entropy with 0 log 0 = 0.
inline double entropy(std::span<const double> d) {
  double h = 0.0;
  for (double v : d)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

inline double hellinger_to_uniform(std::span<const double> d) {
  const double su = std::sqrt(1.0 / static_cast<double>(d.size()));
  double s = 0.0;
  for (double v : d) {
    const double diff = std::sqrt(std::max(v, 0.0)) - su;
    s += diff * diff;
  }
  return std::sqrt(0.5 * s);
}

inline StationarityMetrics stationarity_metrics(const Distribution& d, double p) {
  std::span<const double> v(d.values());
  return {p, lp_distance_to_uniform(v, p), lp_distance_to_uniform(v, kInf), entropy(v), hellinger_to_uniform(v)};
}

// ---------------------------------------------------------------------------
// Majorization

enum class Majorization { StrictlyMajorizes, WeaklyMajorizes, Incomparable };

constexpr std::string_view to_string(Majorization m) {
  switch (m) {
    case Majorization::StrictlyMajorizes: return "StrictlyMajorizes";
    case Majorization::WeaklyMajorizes: return "WeaklyMajorizes";
    case Majorization::Incomparable: return "Incomparable";
  }
  return "?";
}

struct MajorizationVerdict {
  Majorization verdict = Majorization::Incomparable;
  double worst_margin = 0.0;  // min over prefixes of (F_i - G_i)
  double best_margin = 0.0;   // max over prefixes of (F_i - G_i)
};

/// Compares decreasing-rearrangement prefix sums of f and g.
inline MajorizationVerdict majorizes(std::span<const double> f, std::span<const double> g, double tol) {
  detail::require(f.size() == g.size(), ErrorKind::InvalidArgument, "majorization needs equal lengths");
  std::vector<double> a(f.begin(), f.end()), b(g.begin(), g.end());
  std::sort(a.begin(), a.end(), std::greater<>());
  std::sort(b.begin(), b.end(), std::greater<>());
  double fa = 0.0, gb = 0.0;
  double worst = kInf, best = -kInf;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    fa += a[i];
    gb += b[i];
    worst = std::min(worst, fa - gb);
    best = std::max(best, fa - gb);
  }
  if (a.size() <= 1) worst = best = 0.0;
  MajorizationVerdict v{Majorization::Incomparable, worst, best};
  if (worst >= -tol) v.verdict = best > tol ? Majorization::StrictlyMajorizes : Majorization::WeaklyMajorizes;
  return v;
}

inline MajorizationVerdict majorizes(const Distribution& f, const Distribution& g, double tol) {
  return majorizes(std::span<const double>(f.values()), std::span<const double>(g.values()), tol);
}

// ---------------------------------------------------------------------------
// Refresh operators and coin-flip distributions

/// State pairing x -> x s for an involutive generator s.
inline std::vector<Element> generator_pairing(const CayleyGraph& cg, std::size_t s) {
  detail::require(cg.generators().is_involution(s), ErrorKind::InvalidArgument,
                  "refresh pairing needs an involutive generator, got '" + cg.generators()[s].label + "'");
  std::vector<Element> pairing(cg.order());
  for (Element x = 0; x < cg.order(); ++x) pairing[x] = cg.neighbor(x, s);
  return pairing;
}

/// Pairing that swaps states a and b and fixes the rest.
inline std::vector<Element> swap_pairing(std::size_t n, std::size_t a, std::size_t b) {
  std::vector<Element> pairing(n);
  std::iota(pairing.begin(), pairing.end(), Element{0});
  std::swap(pairing.at(a), pairing.at(b));
  return pairing;
}

/// Averages the mass of each pair {x, pairing(x)}.
inline Distribution refresh_operator(const Distribution& d, std::span<const Element> pairing) {
  detail::require(pairing.size() == d.size(), ErrorKind::InvalidArgument, "pairing has the wrong length");
  std::vector<double> out(d.size());
  for (std::size_t x = 0; x < d.size(); ++x) {
    const Element y = pairing[x];
    detail::require(y < d.size() && pairing[y] == x, ErrorKind::InvalidArgument, "pairing is not an involution");
    out[x] = 0.5 * (d[x] + d[y]);
  }
  return Distribution(std::move(out));
}

/// Law of s_1^{b_1} ... s_n^{b_n} for independent fair bits b_i.
inline Distribution discrete_coin_distribution(const CayleyGraph& cg, std::span<const std::string> sequence) {
  Distribution d = Distribution::point_mass(cg.order(), FiniteGroup::identity());
  for (const auto& label : sequence) {
    const auto s = cg.generators().index_of(label);
    d = refresh_operator(d, generator_pairing(cg, s));
  }
  return d;
}

inline Distribution discrete_coin_distribution(const CayleyGraph& cg, const std::vector<std::string>& sequence) {
  return discrete_coin_distribution(cg, std::span<const std::string>(sequence));
}

struct RefreshInsertion {
  double time = 0.0;
  std::vector<Element> pairing;
};

/// Evolves from `start`, applying each refresh operator at its (strictly
/// increasing) time in (0, t).
inline Distribution timed_refresh_distribution(const RateGraph& g, std::size_t start, double t,
                                               const std::vector<RefreshInsertion>& insertions,
                                               double tol = kDefaultTol) {
  detail::check_tol(tol);
  double now = 0.0;
  Distribution d = Distribution::point_mass(g.size(), start);
  const double step_tol = tol / static_cast<double>(insertions.size() + 1);
  for (const auto& ins : insertions) {
    detail::require(ins.time > now && ins.time < t, ErrorKind::InvalidArgument,
                    "insertion times must be strictly increasing inside (0, t)");
    d = evolve(g, d, ins.time - now, step_tol);
    d = refresh_operator(d, ins.pairing);
    now = ins.time;
  }
  return evolve(g, d, t - now, step_tol);
}

// ---------------------------------------------------------------------------
// First passage and occupation

struct SurvivalResult {
  std::vector<double> mass;  // P[Z_t = x, forbidden not yet entered]
  double cemetery = 0.0;     // P[forbidden entered before t]
};

/// Sub-distribution of the walk killed on entering `forbidden`.
inline SurvivalResult restricted_survival(const RateGraph& g, std::span<const std::size_t> forbidden, std::size_t start,
                                          double t, double tol = kDefaultTol) {
  detail::check_tol(tol);
  std::vector<char> killed(g.size(), 0);
  for (auto f : forbidden) killed.at(f) = 1;
  detail::require(start < g.size() && !killed[start], ErrorKind::InvalidArgument, "start state is forbidden");
  std::vector<double> init(g.size(), 0.0);
  init[start] = 1.0;
  auto mass = detail::clamp_nonnegative(
      detail::uniformized(g, std::move(init), t, tol, detail::SeriesKind::Transition, forbidden.empty() ? nullptr : &killed));
  const double alive = std::accumulate(mass.begin(), mass.end(), 0.0);
  return {std::move(mass), std::max(0.0, 1.0 - alive)};
}

/// E[exp(-theta tau)] for the hitting time tau of `target` from `start`.
inline double hitting_laplace(const RateGraph& g, std::span<const std::size_t> target, std::size_t start, double theta) {
  detail::require(theta > 0.0, ErrorKind::InvalidArgument, "theta must be positive");
  std::vector<char> is_target(g.size(), 0);
  for (auto x : target) is_target.at(x) = 1;
  if (is_target.at(start)) return 1.0;

  // Reachability along positive-rate edges.
  std::vector<char> seen(g.size(), 0);
  std::vector<std::size_t> stack{start};
  seen[start] = 1;
  bool reached = false;
  while (!stack.empty()) {
    const auto x = stack.back();
    stack.pop_back();
    if (is_target[x]) {
      reached = true;
      continue;
    }
    for (auto y : g.neighbors(x))
      if (!seen[y]) {
        seen[y] = 1;
        stack.push_back(y);
      }
  }
  detail::require(reached, ErrorKind::SingularSystem, "target is unreachable from the start state");

  // (theta + q_x) u(x) - sum_{y not target} Q(x, y) u(y) = sum_{y in target} Q(x, y)
  std::vector<std::size_t> idx(g.size(), 0), states;
  for (std::size_t x = 0; x < g.size(); ++x)
    if (!is_target[x] && seen[x]) {
      idx[x] = states.size();
      states.push_back(x);
    }
  const auto m = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto x = states[static_cast<std::size_t>(i)];
    a(i, i) = theta + g.exit_rate(x);
    auto nb = g.neighbors(x);
    auto rt = g.neighbor_rates(x);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (is_target[nb[k]])
        b(i) += rt[k];
      else
        a(i, static_cast<Eigen::Index>(idx[nb[k]])) -= rt[k];
    }
  }
  const Eigen::VectorXd u = a.partialPivLu().solve(b);
  return u(static_cast<Eigen::Index>(idx[start]));
}

/// Expected time spent in each state during [0, t], starting from `start`.
inline std::vector<double> expected_occupation_all(const RateGraph& g, std::size_t start, double t,
                                                   double tol = kDefaultTol) {
  detail::check_tol(tol);
  detail::require(start < g.size(), ErrorKind::InvalidArgument, "start state out of range");
  std::vector<double> init(g.size(), 0.0);
  init[start] = 1.0;
  return detail::uniformized(g, std::move(init), t, tol, detail::SeriesKind::Occupation);
}

/// Integral over [0, t] of p_s(start, v) ds.
inline double expected_occupation(const RateGraph& g, std::size_t start, std::size_t v, double t,
                                  double tol = kDefaultTol) {
  return expected_occupation_all(g, start, t, tol).at(v);
}

/// sum_x |x| p_t(o, x) for a distribution on a Cayley graph.
inline double expected_distance(const CayleyGraph& cg, const Distribution& d) {
  double e = 0.0;
  for (Element x = 0; x < cg.order(); ++x) e += cg.distance(x) * d[x];
  return e;
}

}  // namespace crw
