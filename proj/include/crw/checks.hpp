#pragma once

// Property suites over many random instances: the monotonicity theorems on
// finite Coxeter systems, the l^2 / l^inf statements on arbitrary
// permutation groups, the reflection principle on walls, and the wall
// lemmas on the small catalogue. Each returns counts plus the worst margin
// seen so callers can report how close a run came to failing.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "crw/coxeter.hpp"
#include "crw/ctmc.hpp"
#include "crw/group.hpp"
#include "crw/rng.hpp"
#include "crw/search.hpp"

namespace crw {

struct SuiteReport {
  SuiteReport(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // smallest slack seen
  std::string first_failure;

  bool passed() const { return failures == 0 && cases > 0; }
  void record(bool ok, double margin, const std::string& what) {
    ++cases;
    worst_margin = std::min(worst_margin, margin);
    if (!ok && failures++ == 0) first_failure = what;
  }
};

inline RateAssignment random_rates(const GeneratorSet& gens, CounterRng& rng, double lo, double hi) {
  std::vector<double> r(gens.size(), 0.0);
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (gens[i].inverse >= i) r[i] = r[gens[i].inverse] = rng.uniform(lo, hi);
  return RateAssignment(gens, std::move(r));
}

struct CoxeterSuiteConfig {
  std::size_t instances = 20;
  std::vector<double> times{0.1, 1.0, 10.0};
  std::vector<double> deltas{0.1, 1.0};
  double rate_min = 1.0;
  double rate_max = 3.0;
  double margin = kStrictMargin;
  std::uint64_t seed = 1;
  double tol = kDefaultTol;
};

/// For random rates and each time: p_t(o, x) > p_t(o, y) + margin over all
/// strict Bruhat pairs x < y, and raising any single rate gives a
/// distribution strictly majorized by the original.
inline std::pair<SuiteReport, SuiteReport> coxeter_monotonicity_suite(const CoxeterRealization& real,
                                                                      const CoxeterSuiteConfig& cfg) {
  SuiteReport bruhat{"bruhat " + real.name()};
  SuiteReport major{"majorization " + real.name()};
  const auto cg = real.cayley();
  const BruhatOrder order(cg);
  const auto pairs = order.strict_pairs();
  const auto& gens = real.generators();
  for (std::size_t inst = 0; inst < cfg.instances; ++inst) {
    CounterRng rng(cfg.seed, inst);
    const auto rates = random_rates(gens, rng, cfg.rate_min, cfg.rate_max);
    const auto graph = RateGraph::from_cayley(cg, rates);
    for (double t : cfg.times) {
      const auto d = transition_distribution(graph, 0, t, cfg.tol);
      double worst = std::numeric_limits<double>::infinity();
      Element wx = 0, wy = 0;
      for (auto [x, y] : pairs) {
        const double gap = d[x] - d[y];
        if (gap < worst) {
          worst = gap;
          wx = x;
          wy = y;
        }
      }
      bruhat.record(worst > cfg.margin, worst,
                    "instance " + std::to_string(inst) + " t=" + std::to_string(t) + " pair (" + std::to_string(wx) +
                        ", " + std::to_string(wy) + ") gap " + std::to_string(worst));
      for (std::size_t s = 0; s < gens.size(); ++s) {
        for (double delta : cfg.deltas) {
          const auto after =
              transition_distribution(RateGraph::from_cayley(cg, rates.increased(gens, s, delta)), 0, t, cfg.tol);
          const auto v = majorizes(d, after, 1e-12);
          major.record(v.verdict == Majorization::StrictlyMajorizes, v.best_margin,
                       "instance " + std::to_string(inst) + " t=" + std::to_string(t) + " generator " + gens[s].label +
                           " delta " + std::to_string(delta) + ": " + std::string(to_string(v.verdict)));
        }
      }
    }
  }
  return {bruhat, major};
}

struct DiscreteSuiteConfig {
  std::size_t trials = 100;
  std::size_t max_length = 10;
  std::uint64_t seed = 1;
  bool strict = true;  // false accepts weak majorization
};

/// The coin distribution of a proper subsequence strictly majorizes that of
/// the full sequence.
inline SuiteReport discrete_majorization_suite(const CoxeterRealization& real, const DiscreteSuiteConfig& cfg) {
  SuiteReport rep{"discrete " + real.name()};
  const auto cg = real.cayley();
  const auto& gens = real.generators();
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    CounterRng rng(cfg.seed, trial);
    const std::size_t len = 1 + rng.below(cfg.max_length);
    std::vector<std::string> seq;
    for (std::size_t i = 0; i < len; ++i) seq.push_back(gens[rng.below(gens.size())].label);
    // a random proper subsequence: keep each entry with probability 1/2, then
    // drop one kept entry if everything survived
    std::vector<std::string> sub;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < len; ++i)
      if (rng.coin()) kept.push_back(i);
    if (kept.size() == len) kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(rng.below(len)));
    for (auto i : kept) sub.push_back(seq[i]);
    const auto full = discrete_coin_distribution(cg, seq);
    const auto part = discrete_coin_distribution(cg, sub);
    const auto v = majorizes(part, full, 1e-12);
    std::string text;
    for (const auto& s : seq) text += s + " ";
    const bool ok = cfg.strict ? v.verdict == Majorization::StrictlyMajorizes : v.verdict != Majorization::Incomparable;
    rep.record(ok, cfg.strict ? v.best_margin : v.worst_margin,
               "sequence " + text + "verdict " + std::string(to_string(v.verdict)));
  }
  return rep;
}

struct PinfSuiteConfig {
  std::size_t trials = 100;
  std::size_t max_degree = 5;  // groups are subgroups of S_max_degree
  std::size_t generators = 4;
  double rate_min = 1.0;
  double rate_max = 10.0;
  std::vector<double> times{0.2, 1.0, 5.0};
  double delta = 0.1;
  double tolerance = 1e-10;
  std::uint64_t seed = 1;
  double tol = kDefaultTol;
};

struct PinfReport {
  SuiteReport monotone{"l2/linf monotone"};
  SuiteReport identities{"l2/linf identities"};
  std::size_t max_order = 0;
};

/// Random subgroups of S_d with random inverse-closed generating sets: raising
/// any rate never increases the l^2 or l^inf distance, l^inf = p_t(o,o) - 1/n
/// and (l^2)^2 = l^inf at 2t.
inline PinfReport pinf_suite(const PinfSuiteConfig& cfg) {
  PinfReport rep;
  std::vector<GeneratedGroup> ambient;
  for (std::size_t d = 3; d <= cfg.max_degree; ++d) ambient.push_back(symmetric_group(d));
  std::size_t trial = 0;
  for (std::size_t attempt = 0; trial < cfg.trials; ++attempt) {
    detail::require(attempt < 100 * cfg.trials, ErrorKind::BudgetExhausted, "could not draw enough configurations");
    CounterRng rng(cfg.seed, attempt);
    const auto& amb = ambient[rng.below(ambient.size())];
    auto elements = detail::sample_generators(amb.group, cfg.generators, false, rng);
    if (elements.empty()) continue;
    std::vector<Permutation> perms;
    for (auto e : elements) perms.push_back(amb.group.permutation(e));
    const FiniteGroup g = generate_group(perms);
    if (g.order() < 2) continue;
    std::vector<std::pair<std::string, Element>> labelled;
    for (std::size_t i = 0; i < perms.size(); ++i) labelled.emplace_back("g" + std::to_string(i), *g.find(perms[i]));
    const GeneratorSet gens(g, std::move(labelled));
    const CayleyGraph cg(g, gens);
    const auto rates = random_rates(gens, rng, cfg.rate_min, cfg.rate_max);
    const auto graph = RateGraph::from_cayley(cg, rates);
    const double n = static_cast<double>(g.order());
    rep.max_order = std::max(rep.max_order, g.order());
    ++trial;
    for (double t : cfg.times) {
      const auto d = transition_distribution(graph, 0, t, cfg.tol);
      const auto d2 = transition_distribution(graph, 0, 2 * t, cfg.tol);
      const double linf = lp_distance_to_uniform(d.values(), kInf);
      const double l2 = lp_distance_to_uniform(d.values(), 2.0);
      const double id1 = std::abs(linf - (d[0] - 1.0 / n));
      const double id2 = std::abs(l2 * l2 - lp_distance_to_uniform(d2.values(), kInf));
      rep.identities.record(id1 <= cfg.tolerance && id2 <= cfg.tolerance, cfg.tolerance - std::max(id1, id2),
                            "trial " + std::to_string(trial) + " t=" + std::to_string(t));
      for (std::size_t s : gens.inverse_classes()) {
        const auto after =
            transition_distribution(RateGraph::from_cayley(cg, rates.increased(gens, s, cfg.delta)), 0, t, cfg.tol);
        const double dl2 = lp_distance_to_uniform(after.values(), 2.0) - l2;
        const double dinf = lp_distance_to_uniform(after.values(), kInf) - linf;
        const double worst = std::max(dl2, dinf);
        rep.monotone.record(worst <= cfg.tolerance, cfg.tolerance - worst,
                            "trial " + std::to_string(trial) + " t=" + std::to_string(t) + " increase " +
                                std::to_string(worst));
      }
    }
  }
  return rep;
}

/// P[walk has entered the far side of a wall by t] = 2 P[Z_t on the far side].
/// Which stopping time the reflection identity is checked against.
///   FirstEntrance: inf{t : Z_t in M-}, the literal hitting time.
///   WallRing: first ring of a rate-2r refresh clock on a wall edge at the
///   walker's position; equivalently the first entrance into M- for the
///   chain whose wall edges carry twice their rate.
enum class WallTime { FirstEntrance, WallRing };

/// Rate graph of the Cayley graph with the edges of `wall` at doubled rate.
inline RateGraph wall_ring_graph(const CayleyGraph& cg, const RateAssignment& rates, const Wall& wall) {
  std::vector<Edge> edges;
  for (Element x = 0; x < cg.order(); ++x)
    for (std::size_t s = 0; s < cg.generators().size(); ++s) {
      const auto y = cg.neighbor(x, s);
      if (x < y) edges.push_back({x, y, rates[s]});
    }
  // parallel edges are merged, so repeating a wall edge doubles its rate
  for (const auto& e : wall.edges) edges.push_back({e.x, cg.neighbor(e.x, e.generator), rates[e.generator]});
  return RateGraph(cg.order(), std::move(edges));
}

/// P[tau < t] against 2 P[Z_t in M-] for every wall.
inline SuiteReport reflection_principle_suite(const CoxeterRealization& real, const std::vector<double>& times,
                                              std::size_t instances = 1, std::uint64_t seed = 1,
                                              double tolerance = 1e-9, double tol = kDefaultTol,
                                              WallTime kind = WallTime::FirstEntrance) {
  SuiteReport rep{std::string(kind == WallTime::WallRing ? "wall-ring" : "first-entrance") +
                  " reflection principle " + real.name()};
  const auto cg = real.cayley();
  const auto walls = all_walls(cg);
  for (std::size_t inst = 0; inst < instances; ++inst) {
    CounterRng rng(seed, inst);
    const auto rates = random_rates(real.generators(), rng, 0.5, 3.0);
    const auto graph = RateGraph::from_cayley(cg, rates);
    for (double t : times) {
      const auto d = transition_distribution(graph, 0, t, tol);
      for (const auto& w : walls) {
        const auto far = w.minus_side();
        std::vector<std::size_t> forbidden(far.begin(), far.end());
        const double crossed =
            kind == WallTime::WallRing
                ? restricted_survival(wall_ring_graph(cg, rates, w), forbidden, 0, t, tol).cemetery
                : restricted_survival(graph, forbidden, 0, t, tol).cemetery;
        double there = 0.0;
        for (auto x : far) there += d[x];
        const double err = std::abs(crossed - 2.0 * there);
        rep.record(err <= tolerance, tolerance - err,
                   "reflection " + std::to_string(w.reflection) + " t=" + std::to_string(t) + " error " +
                       std::to_string(err));
      }
    }
  }
  return rep;
}

/// Finite Coxeter systems (irreducible catalogue types and their products)
/// of order at most `max_order`.
inline std::vector<CoxeterMatrix> coxeter_catalogue(std::size_t max_order) {
  struct Irreducible {
    CoxeterMatrix matrix;
    std::size_t order;
  };
  std::vector<Irreducible> base;
  auto factorial = [](std::size_t n) {
    std::size_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
  };
  for (std::size_t n = 1; factorial(n + 1) <= max_order; ++n) base.push_back({CoxeterMatrix::type_a(n), factorial(n + 1)});
  for (std::size_t n = 3; (std::size_t{1} << n) * factorial(n) <= max_order; ++n)
    base.push_back({CoxeterMatrix::type_b(n), (std::size_t{1} << n) * factorial(n)});
  for (std::size_t n = 4; (std::size_t{1} << (n - 1)) * factorial(n) <= max_order; ++n)
    base.push_back({CoxeterMatrix::type_d(n), (std::size_t{1} << (n - 1)) * factorial(n)});
  for (unsigned m = 4; 2 * m <= max_order; ++m) base.push_back({CoxeterMatrix::dihedral(m), 2 * std::size_t{m}});

  std::vector<CoxeterMatrix> out;
  // multisets of irreducibles, indices nondecreasing
  std::vector<std::size_t> stack;
  auto recurse = [&](auto&& self, std::size_t from, std::size_t order, std::optional<CoxeterMatrix> acc) -> void {
    if (acc) out.push_back(*acc);
    for (std::size_t i = from; i < base.size(); ++i) {
      if (order * base[i].order > max_order) continue;
      self(self, i, order * base[i].order, acc ? CoxeterMatrix::product(*acc, base[i].matrix) : base[i].matrix);
    }
  };
  recurse(recurse, 0, 1, std::nullopt);
  return out;
}

inline std::vector<WallAxiomReport> wall_axiom_catalogue(std::size_t max_order = 48) {
  std::vector<WallAxiomReport> out;
  for (const auto& m : coxeter_catalogue(max_order)) out.push_back(verify_wall_axioms(coxeter_group(m)));
  return out;
}

}  // namespace crw
