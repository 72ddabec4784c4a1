#pragma once

// Event-driven Monte Carlo for walks with generator (or edge) clocks.
//
// A walkable space supplies:
//   State start() const;
//   double exit_rate(const State&) const;          // total clock rate at a state
//   void jump(State&, double u) const;             // u uniform on [0, exit_rate)
//   double distance(const State&) const;           // distance from the start
//   double total_rate() const;                     // > 0 unless the walk is frozen
//
// Direct mode waits Exp(exit rate) and always moves. Refresh mode runs every
// clock at twice its rate and moves on a fair coin, which gives the same law.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "crw/error.hpp"
#include "crw/group.hpp"
#include "crw/parallel.hpp"
#include "crw/rng.hpp"

namespace crw {

template <class S>
concept WalkSpace = requires(const S& space, typename S::State state, double u) {
  { space.start() } -> std::convertible_to<typename S::State>;
  { space.exit_rate(state) } -> std::convertible_to<double>;
  { space.jump(state, u) };
  { space.distance(state) } -> std::convertible_to<double>;
  { space.total_rate() } -> std::convertible_to<double>;
};

enum class SimMode { Direct, Refresh };

struct SimConfig {
  double horizon = 2000.0;
  std::size_t replicas = 200;
  std::uint64_t seed = 1;
  SimMode mode = SimMode::Direct;
  unsigned threads = 0;

  void validate() const {
    detail::require(horizon > 0.0 && std::isfinite(horizon), ErrorKind::InvalidArgument, "horizon must be positive");
    detail::require(replicas >= 1, ErrorKind::InvalidArgument, "at least one replica is required");
  }
};

template <class State>
struct TrajectorySummary {
  State endpoint{};
  double distance = 0.0;
  std::uint64_t events = 0;  // clock rings (including refresh rings that stay)
  std::uint64_t moves = 0;
  std::vector<double> occupation;  // time spent at each tracked state
};

struct SpeedEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t replicas = 0;
  double horizon = 0.0;
  std::vector<double> samples;  // |Z_T| / T per replica
};

// ---------------------------------------------------------------------------
// Spaces

/// Walk on a finite Cayley graph with generator rates.
class CayleySpace {
 public:
  using State = Element;

  CayleySpace(CayleyGraph cg, const RateAssignment& rates) : cg_(std::move(cg)) {
    detail::require(rates.size() == cg_.generators().size(), ErrorKind::InvalidArgument,
                    "rates do not match generators");
    double acc = 0.0;
    for (std::size_t s = 0; s < rates.size(); ++s) {
      acc += rates[s];
      cumulative_.push_back(acc);
    }
  }

  State start() const { return FiniteGroup::identity(); }
  double exit_rate(const State&) const { return total_rate(); }
  double total_rate() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  double distance(const State& x) const { return cg_.distance(x); }
  void jump(State& x, double u) const { x = cg_.neighbor(x, pick(u)); }

  const CayleyGraph& graph() const noexcept { return cg_; }

 private:
  std::size_t pick(double u) const {
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    auto s = static_cast<std::size_t>(it - cumulative_.begin());
    if (s >= cumulative_.size()) s = cumulative_.size() - 1;
    while (s > 0 && cumulative_[s] == cumulative_[s - 1]) --s;  // skip zero-rate generators
    return s;
  }

  CayleyGraph cg_;
  std::vector<double> cumulative_;
};

/// Free product of finite groups. Elements are reduced words of syllables
/// (factor, non-identity element) with adjacent syllables in distinct
/// factors; |word| is the sum of the factors' word lengths.
class FreeProductGroup {
 public:
  struct Syllable {
    std::uint32_t factor = 0;
    Element element = 0;
    friend bool operator==(const Syllable&, const Syllable&) = default;
  };

  struct Word {
    std::vector<Syllable> syllables;
    std::uint64_t length = 0;
    friend bool operator==(const Word& a, const Word& b) { return a.syllables == b.syllables; }
  };

  explicit FreeProductGroup(std::vector<CayleyGraph> factors) : factors_(std::move(factors)) {
    detail::require(factors_.size() >= 2, ErrorKind::InvalidArgument, "a free product needs at least two factors");
    for (const auto& f : factors_)
      detail::require(f.order() >= 2, ErrorKind::InvalidArgument, "free product factors must be nontrivial");
  }

  /// Free Coxeter group: p copies of Z/2Z.
  static FreeProductGroup free_coxeter(std::size_t p) {
    std::vector<CayleyGraph> f;
    for (std::size_t i = 0; i < p; ++i) f.push_back(cyclic_group(2).cayley());
    return FreeProductGroup(std::move(f));
  }

  std::size_t factor_count() const noexcept { return factors_.size(); }
  const CayleyGraph& factor(std::size_t i) const { return factors_[i]; }

  /// word * element of one factor, kept in normal form.
  void multiply(Word& w, std::uint32_t factor, Element element) const {
    detail::require(element != FiniteGroup::identity(), ErrorKind::InvalidArgument,
                    "syllable element must not be the identity");
    const auto& cg = factors_.at(factor);
    if (!w.syllables.empty() && w.syllables.back().factor == factor) {
      auto& last = w.syllables.back();
      w.length -= cg.distance(last.element);
      last.element = cg.group().multiply(last.element, element);
      if (last.element == FiniteGroup::identity())
        w.syllables.pop_back();
      else
        w.length += cg.distance(last.element);
    } else {
      w.syllables.push_back({factor, element});
      w.length += cg.distance(element);
    }
  }

  /// word * (generator of one factor); uses the precomputed Cayley tables.
  void step(Word& w, std::uint32_t factor, std::size_t generator) const {
    const auto& cg = factors_[factor];
    if (!w.syllables.empty() && w.syllables.back().factor == factor) {
      auto& last = w.syllables.back();
      w.length -= cg.distance(last.element);
      last.element = cg.neighbor(last.element, generator);
      if (last.element == FiniteGroup::identity())
        w.syllables.pop_back();
      else
        w.length += cg.distance(last.element);
    } else {
      const Element e = cg.generators()[generator].element;
      w.syllables.push_back({factor, e});
      w.length += cg.distance(e);
    }
  }

  std::uint64_t length(const Word& w) const {
    std::uint64_t total = 0;
    for (const auto& s : w.syllables) total += factors_[s.factor].distance(s.element);
    return total;
  }

 private:
  std::vector<CayleyGraph> factors_;
};

/// Appends a syllable to a reduced word.
inline FreeProductGroup::Word multiply_normal_form(const FreeProductGroup& g, FreeProductGroup::Word w,
                                                   std::uint32_t factor, Element element) {
  g.multiply(w, factor, element);
  return w;
}

/// Walk on a free product with per-factor generator rates.
class FreeProductSpace {
 public:
  using State = FreeProductGroup::Word;

  FreeProductSpace(FreeProductGroup group, const std::vector<RateAssignment>& rates) : group_(std::move(group)) {
    detail::require(rates.size() == group_.factor_count(), ErrorKind::InvalidArgument,
                    "one rate assignment per factor is required");
    double acc = 0.0;
    for (std::uint32_t f = 0; f < rates.size(); ++f) {
      detail::require(rates[f].size() == group_.factor(f).generators().size(), ErrorKind::InvalidArgument,
                      "rates do not match factor generators");
      for (std::size_t s = 0; s < rates[f].size(); ++s) {
        if (rates[f][s] == 0.0) continue;
        acc += rates[f][s];
        moves_.push_back({acc, f, s});
      }
    }
  }

  State start() const { return {}; }
  double exit_rate(const State&) const { return total_rate(); }
  double total_rate() const { return moves_.empty() ? 0.0 : moves_.back().cumulative; }
  double distance(const State& w) const { return static_cast<double>(w.length); }
  void jump(State& w, double u) const {
    auto it = std::upper_bound(moves_.begin(), moves_.end(), u,
                               [](double v, const Move& m) { return v < m.cumulative; });
    if (it == moves_.end()) --it;
    group_.step(w, it->factor, it->generator);
  }

  const FreeProductGroup& group() const noexcept { return group_; }

 private:
  struct Move {
    double cumulative;
    std::uint32_t factor;
    std::size_t generator;
  };

  FreeProductGroup group_;
  std::vector<Move> moves_;
};

/// Nearest-neighbour walk on {0, ..., N}; rates[i - 1] is the rate of the
/// edge (i - 1, i).
class PathSpace {
 public:
  using State = std::uint32_t;

  explicit PathSpace(std::vector<double> rates) : rates_(std::move(rates)) {
    for (double r : rates_)
      detail::require(r >= 0.0 && std::isfinite(r), ErrorKind::InvalidArgument, "ray rates must be nonnegative");
  }

  State start() const { return 0; }
  double left(State i) const { return i == 0 ? 0.0 : rates_[i - 1]; }
  double right(State i) const { return i < rates_.size() ? rates_[i] : 0.0; }
  double exit_rate(const State& i) const { return left(i) + right(i); }
  double total_rate() const { return std::accumulate(rates_.begin(), rates_.end(), 0.0); }
  double distance(const State& i) const { return i; }
  void jump(State& i, double u) const {
    if (u < left(i))
      --i;
    else
      ++i;
  }

 private:
  std::vector<double> rates_;
};

/// Direct product of two spaces; distances add.
template <WalkSpace A, WalkSpace B>
class ProductSpace {
 public:
  using State = std::pair<typename A::State, typename B::State>;

  ProductSpace(A a, B b) : a_(std::move(a)), b_(std::move(b)) {}

  State start() const { return {a_.start(), b_.start()}; }
  double exit_rate(const State& s) const { return a_.exit_rate(s.first) + b_.exit_rate(s.second); }
  double total_rate() const { return a_.total_rate() + b_.total_rate(); }
  double distance(const State& s) const { return a_.distance(s.first) + b_.distance(s.second); }
  void jump(State& s, double u) const {
    const double ra = a_.exit_rate(s.first);
    if (u < ra)
      a_.jump(s.first, u);
    else
      b_.jump(s.second, u - ra);
  }

 private:
  A a_;
  B b_;
};

// ---------------------------------------------------------------------------
// Simulation

/// One replica. Occupation uses the left-continuous convention: the walk
/// sits at a state on [jump time, next jump time).
template <WalkSpace Space>
TrajectorySummary<typename Space::State> simulate_walk(const Space& space, double horizon, SimMode mode,
                                                       CounterRng& rng,
                                                       const std::vector<typename Space::State>& tracked = {}) {
  detail::require(space.total_rate() > 0.0, ErrorKind::InvalidArgument, "all rates are zero");
  detail::require(horizon > 0.0, ErrorKind::InvalidArgument, "horizon must be positive");
  TrajectorySummary<typename Space::State> out;
  out.occupation.assign(tracked.size(), 0.0);
  auto state = space.start();
  double now = 0.0;
  const double speedup = mode == SimMode::Refresh ? 2.0 : 1.0;

  auto credit = [&](double dt) {
    for (std::size_t i = 0; i < tracked.size(); ++i)
      if (tracked[i] == state) out.occupation[i] += dt;
  };

  while (true) {
    const double rate = space.exit_rate(state);
    if (rate <= 0.0) {
      credit(horizon - now);
      break;
    }
    const double dt = rng.exponential(speedup * rate);
    if (now + dt >= horizon) {
      credit(horizon - now);
      break;
    }
    credit(dt);
    now += dt;
    ++out.events;
    if (mode == SimMode::Refresh && !rng.coin()) continue;
    space.jump(state, rng.uniform() * rate);
    ++out.moves;
  }
  out.distance = space.distance(state);
  out.endpoint = std::move(state);
  return out;
}

/// Replica `index` of a configuration, on its own random stream.
template <WalkSpace Space>
TrajectorySummary<typename Space::State> simulate_walk(const Space& space, const SimConfig& cfg, std::size_t index,
                                                       const std::vector<typename Space::State>& tracked = {}) {
  cfg.validate();
  CounterRng rng(cfg.seed, index);
  return simulate_walk(space, cfg.horizon, cfg.mode, rng, tracked);
}

/// All replicas, in replica order.
template <WalkSpace Space>
std::vector<TrajectorySummary<typename Space::State>> simulate_replicas(
    const Space& space, const SimConfig& cfg, const std::vector<typename Space::State>& tracked = {}) {
  cfg.validate();
  std::vector<TrajectorySummary<typename Space::State>> out(cfg.replicas);
  parallel_for(cfg.replicas, cfg.threads, [&](std::size_t i) { out[i] = simulate_walk(space, cfg, i, tracked); });
  return out;
}

inline SpeedEstimate summarize_speed(std::vector<double> samples, double horizon) {
  SpeedEstimate est;
  est.replicas = samples.size();
  est.horizon = horizon;
  const double n = static_cast<double>(samples.size());
  est.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : samples) ss += (v - est.mean) * (v - est.mean);
  est.standard_error = samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
  est.samples = std::move(samples);
  return est;
}

/// Mean of |Z_T| / T over replicas, with its standard error.
template <WalkSpace Space>
SpeedEstimate speed_mc(const Space& space, const SimConfig& cfg) {
  cfg.validate();
  std::vector<double> samples(cfg.replicas);
  parallel_for(cfg.replicas, cfg.threads, [&](std::size_t i) {
    CounterRng rng(cfg.seed, i);
    samples[i] = simulate_walk(space, cfg.horizon, cfg.mode, rng).distance / cfg.horizon;
  });
  return summarize_speed(std::move(samples), cfg.horizon);
}

/// samples[k][i] = time spent at states[k] during [0, t] in replica i.
template <WalkSpace Space>
std::vector<std::vector<double>> occupation_samples(const Space& space, const std::vector<typename Space::State>& states,
                                                    double t, std::size_t replicas, std::uint64_t seed,
                                                    SimMode mode = SimMode::Direct, unsigned threads = 0) {
  SimConfig cfg{t, replicas, seed, mode, threads};
  cfg.validate();
  std::vector<std::vector<double>> out(states.size(), std::vector<double>(replicas));
  parallel_for(replicas, threads, [&](std::size_t i) {
    CounterRng rng(seed, i);
    auto run = simulate_walk(space, t, mode, rng, states);
    for (std::size_t k = 0; k < states.size(); ++k) out[k][i] = run.occupation[k];
  });
  return out;
}

// ---------------------------------------------------------------------------
// Stochastic dominance

enum class Dominance { Dominates, Crosses, Inconclusive };

constexpr std::string_view to_string(Dominance d) {
  switch (d) {
    case Dominance::Dominates: return "Dominates";
    case Dominance::Crosses: return "Crosses";
    case Dominance::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct DominanceResult {
  Dominance verdict = Dominance::Inconclusive;
  double forward_violation = 0.0;  // sup (F_A - F_B)
  double reverse_violation = 0.0;  // sup (F_B - F_A)
  double band = 0.0;
};

/// Does A stochastically dominate B? Empirical CDFs are compared with a
/// Dvoretzky-Kiefer-Wolfowitz band at `level` for each sample:
/// Dominates if F_A <= F_B + band everywhere; Crosses if each CDF exceeds
/// the other by more than the band somewhere.
inline DominanceResult dominance_test(std::vector<double> a, std::vector<double> b, double level) {
  detail::require(!a.empty() && !b.empty(), ErrorKind::InvalidArgument, "sample sets must be nonempty");
  detail::require(level > 0.0 && level < 1.0, ErrorKind::InvalidArgument, "level must lie in (0, 1)");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());

  DominanceResult r;
  r.band = std::sqrt(std::log(2.0 / level) / (2.0 * na)) + std::sqrt(std::log(2.0 / level) / (2.0 * nb));
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j]))
      x = a[i];
    else
      x = b[j];
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    const double fa = static_cast<double>(i) / na, fb = static_cast<double>(j) / nb;
    r.forward_violation = std::max(r.forward_violation, fa - fb);
    r.reverse_violation = std::max(r.reverse_violation, fb - fa);
  }
  if (r.forward_violation <= r.band)
    r.verdict = Dominance::Dominates;
  else if (r.reverse_violation > r.band)
    r.verdict = Dominance::Crosses;
  else
    r.verdict = Dominance::Inconclusive;
  return r;
}

}  // namespace crw
