#pragma once

// Randomised search for rate increases that move a walk away from uniform,
// the interval of exponents p over which that happens, and a fixed
// catalogue of known positive and negative instances.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "crw/ctmc.hpp"
#include "crw/error.hpp"
#include "crw/group.hpp"
#include "crw/parallel.hpp"
#include "crw/rng.hpp"

namespace crw {

/// Deltas at or below this are treated as zero.
inline constexpr double kDeltaFloor = 1e-10;

inline std::vector<double> default_p_grid() {
  return {1.0, 1.1, 1.2, 1.4, 1.6, 1.8, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0, kInf};
}

struct MetricDeltas {
  std::vector<double> p_grid;
  std::vector<double> lp;  // l^p(after) - l^p(before), per p
  double entropy = 0.0;    // entropy(after) - entropy(before)
  Majorization majorization = Majorization::Incomparable;  // before vs after
};

inline MetricDeltas metric_deltas(const Distribution& before, const Distribution& after,
                                  const std::vector<double>& p_grid) {
  MetricDeltas d;
  d.p_grid = p_grid;
  for (double p : p_grid)
    d.lp.push_back(lp_distance_to_uniform(after.values(), p) - lp_distance_to_uniform(before.values(), p));
  d.entropy = entropy(after.values()) - entropy(before.values());
  d.majorization = majorizes(before, after, 1e-12).verdict;
  return d;
}

/// Change in l^p distance to uniform (and entropy) of p_t(o, .) when the
/// rate of generator s and its inverse is raised by delta.
inline MetricDeltas perturb_metric_deltas(const CayleyGraph& cg, const RateAssignment& rates, std::size_t s,
                                          double delta, double t, const std::vector<double>& p_grid,
                                          double tol = kDefaultTol) {
  detail::require(s < cg.generators().size(), ErrorKind::InvalidArgument, "generator index out of range");
  const auto before = transition_distribution(RateGraph::from_cayley(cg, rates), 0, t, tol);
  const auto after =
      transition_distribution(RateGraph::from_cayley(cg, rates.increased(cg.generators(), s, delta)), 0, t, tol);
  return metric_deltas(before, after, p_grid);
}

struct MetricDelta {
  double lp = 0.0;
  double entropy = 0.0;
};

inline MetricDelta perturb_metric_delta(const CayleyGraph& cg, const RateAssignment& rates, std::size_t s,
                                        double delta, double t, double p, double tol = kDefaultTol) {
  const auto d = perturb_metric_deltas(cg, rates, s, delta, t, {p}, tol);
  return {d.lp[0], d.entropy};
}

// ---------------------------------------------------------------------------
// Search

struct SearchConfig {
  Family family = Family::Dihedral;
  std::vector<std::size_t> sizes{5};
  std::size_t generators = 4;
  double rate_min = 1.0;
  double rate_max = 10.0;
  double t_min = 0.05;
  double t_max = 10.0;
  std::vector<double> deltas{0.1};
  std::vector<double> p_grid = default_p_grid();
  std::size_t budget = 1000;
  std::uint64_t seed = 1;
  bool allow_duplicates = false;  // permit two labels on one element
  std::size_t max_examples = 0;   // 0: no limit
  unsigned threads = 0;
  double tol = kDefaultTol;

  void validate() const {
    detail::require(!sizes.empty(), ErrorKind::InvalidArgument, "size list must be nonempty");
    detail::require(generators >= 1, ErrorKind::InvalidArgument, "need at least one generator");
    detail::require(rate_min > 0.0 && rate_max >= rate_min, ErrorKind::InvalidArgument, "bad rate range");
    detail::require(t_min > 0.0 && t_max >= t_min, ErrorKind::InvalidArgument, "bad time range");
    detail::require(!deltas.empty(), ErrorKind::InvalidArgument, "need at least one delta");
    for (double d : deltas) detail::require(d > 0.0, ErrorKind::InvalidArgument, "deltas must be positive");
    detail::require(!p_grid.empty(), ErrorKind::InvalidArgument, "p grid must be nonempty");
    for (double p : p_grid) detail::require(p >= 1.0, ErrorKind::InvalidArgument, "p grid must lie in [1, inf]");
    detail::require(budget >= 1, ErrorKind::InvalidArgument, "budget must be positive");
  }
};

struct PInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct FoundExample {
  Family family = Family::Dihedral;
  std::size_t n = 0;
  std::size_t order = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<std::uint32_t>> generators;  // permutation images
  std::vector<double> rates;
  double t = 0.0;
  std::string perturbed;  // label whose rate (and its inverse's) is raised
  double delta = 0.0;
  std::vector<double> p_grid;
  std::vector<double> lp_deltas;
  double entropy_delta = 0.0;
  std::vector<PInterval> intervals;
  std::size_t sample = 0;
};

struct SearchResult {
  std::vector<FoundExample> examples;
  std::size_t evaluated = 0;  // samples drawn
  std::size_t rejected = 0;   // samples whose generators did not generate
  bool budget_exhausted = false;
  double max_delta_p2 = -kInf;    // over every evaluated perturbation
  double max_delta_pinf = -kInf;
};

namespace detail {

inline bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Primes first, each group in ascending order.
inline std::vector<std::size_t> prime_first(std::vector<std::size_t> sizes) {
  std::stable_sort(sizes.begin(), sizes.end(), [](std::size_t a, std::size_t b) {
    if (is_prime(a) != is_prime(b)) return is_prime(a);
    return a < b;
  });
  return sizes;
}

/// Random non-identity elements closed under inverses, exactly `count` of
/// them (an inverse pair counts twice). Returns empty if none is found.
inline std::vector<Element> sample_generators(const FiniteGroup& g, std::size_t count, bool allow_duplicates,
                                              CounterRng& rng) {
  std::vector<Element> out;
  if (g.order() < 2) return out;
  for (std::size_t attempt = 0; attempt < 64 * count && out.size() < count; ++attempt) {
    const auto x = static_cast<Element>(1 + rng.below(g.order() - 1));
    const Element inv = g.inverse(x);
    const std::size_t need = inv == x ? 1 : 2;
    if (out.size() + need > count) continue;
    if (!allow_duplicates && std::find(out.begin(), out.end(), x) != out.end()) continue;
    out.push_back(x);
    if (need == 2) out.push_back(inv);
  }
  if (out.size() != count) out.clear();
  return out;
}

struct SampleSpec {
  std::size_t n = 0;
  std::vector<Element> elements;
  std::vector<double> pair_rates;  // per element, equal on inverse pairs
  double t = 0.0;
  bool ok = false;
};

inline SampleSpec draw_sample(const SearchConfig& cfg, const GeneratedGroup& grp, std::size_t n, std::size_t index) {
  CounterRng rng(cfg.seed, index);
  SampleSpec s;
  s.n = n;
  s.elements = sample_generators(grp.group, cfg.generators, cfg.allow_duplicates, rng);
  if (s.elements.empty()) return s;
  s.pair_rates.assign(s.elements.size(), 0.0);
  std::vector<bool> set(s.elements.size(), false);
  for (std::size_t i = 0; i < s.elements.size(); ++i) {
    if (set[i]) continue;
    const double r = rng.uniform(cfg.rate_min, cfg.rate_max);
    s.pair_rates[i] = r;
    set[i] = true;
    // sample_generators appends a non-involution's inverse right after it
    if (i + 1 < s.elements.size() && grp.group.inverse(s.elements[i]) == s.elements[i + 1] &&
        s.elements[i] != s.elements[i + 1]) {
      s.pair_rates[i + 1] = r;
      set[i + 1] = true;
    }
  }
  s.t = std::exp(rng.uniform(std::log(cfg.t_min), std::log(cfg.t_max)));
  s.ok = true;
  return s;
}

inline GeneratorSet labelled_generators(const FiniteGroup& g, const std::vector<Element>& elements,
                                        bool allow_duplicates) {
  std::vector<std::pair<std::string, Element>> gens;
  for (std::size_t i = 0; i < elements.size(); ++i) gens.emplace_back("g" + std::to_string(i), elements[i]);
  return GeneratorSet(g, std::move(gens), allow_duplicates);
}

}  // namespace detail

/// l^p delta as a function of p for a stored example.
inline double example_delta_at(const FoundExample& ex, double p, double tol = kDefaultTol) {
  std::vector<Permutation> perms;
  for (const auto& img : ex.generators) perms.emplace_back(img);
  const FiniteGroup g = builtin_group(ex.family, ex.n).group;
  std::vector<std::pair<std::string, Element>> gens;
  for (std::size_t i = 0; i < perms.size(); ++i) {
    auto e = g.find(perms[i]);
    detail::require(e.has_value(), ErrorKind::InvalidArgument, "example generator is not in the group");
    gens.emplace_back(ex.labels[i], *e);
  }
  GeneratorSet gs(g, std::move(gens), true);
  CayleyGraph cg(g, gs);
  RateAssignment rates(gs, ex.rates);
  return perturb_metric_delta(cg, rates, gs.index_of(ex.perturbed), ex.delta, ex.t, p, tol).lp;
}

/// Maximal p-intervals on which the delta is positive, located on the
/// example's grid (finite p only) and refined by bisection to `refine_tol`.
inline std::vector<PInterval> p_increase_interval(const FoundExample& ex, double refine_tol = 1e-4,
                                                  double tol = kDefaultTol) {
  std::vector<double> ps;
  std::vector<double> ds;
  for (std::size_t i = 0; i < ex.p_grid.size(); ++i)
    if (std::isfinite(ex.p_grid[i])) {
      ps.push_back(ex.p_grid[i]);
      ds.push_back(ex.lp_deltas[i]);
    }
  auto positive = [](double v) { return v > kDeltaFloor; };
  // bisect between a point where positivity is `inside` and one where it is not
  auto edge = [&](double a, double b, bool a_inside) {
    while (std::abs(b - a) > refine_tol) {
      const double m = 0.5 * (a + b);
      if (positive(example_delta_at(ex, m, tol)) == a_inside)
        a = m;
      else
        b = m;
    }
    return 0.5 * (a + b);
  };
  std::vector<PInterval> out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!positive(ds[i])) continue;
    const std::size_t start = i;
    while (i + 1 < ps.size() && positive(ds[i + 1])) ++i;
    PInterval iv;
    iv.lo = start == 0 ? ps[0] : edge(ps[start], ps[start - 1], true);
    iv.hi = i + 1 == ps.size() ? ps[i] : edge(ps[i], ps[i + 1], true);
    out.push_back(iv);
  }
  return out;
}

/// Samples random generating sets, rates and times; records every
/// (generator, delta) perturbation that increases some l^p distance.
/// Sample i draws from its own stream, so results do not depend on the
/// thread count.
inline SearchResult random_search(const SearchConfig& cfg) {
  cfg.validate();
  const auto sizes = detail::prime_first(cfg.sizes);
  std::vector<GeneratedGroup> groups;
  for (std::size_t n : sizes) groups.push_back(builtin_group(cfg.family, n));

  struct Outcome {
    bool rejected = false;
    double max_p2 = -kInf;
    double max_pinf = -kInf;
    std::vector<FoundExample> found;
  };

  SearchResult result;
  const std::size_t chunk = std::max<std::size_t>(256, 4 * resolve_threads(cfg.threads));
  for (std::size_t begin = 0; begin < cfg.budget; begin += chunk) {
    const std::size_t count = std::min(chunk, cfg.budget - begin);
    std::vector<Outcome> outcomes(count);
    parallel_for(count, cfg.threads, [&](std::size_t k) {
      const std::size_t index = begin + k;
      const std::size_t which = index * sizes.size() / cfg.budget;
      const auto& grp = groups[which];
      Outcome& out = outcomes[k];
      auto spec = detail::draw_sample(cfg, grp, sizes[which], index);
      if (!spec.ok) {
        out.rejected = true;
        return;
      }
      std::optional<CayleyGraph> cg;
      GeneratorSet gs;
      try {
        gs = detail::labelled_generators(grp.group, spec.elements, cfg.allow_duplicates);
        cg.emplace(grp.group, gs);
      } catch (const Error&) {
        out.rejected = true;
        return;
      }
      const RateAssignment rates(gs, spec.pair_rates);
      const auto before = transition_distribution(RateGraph::from_cayley(*cg, rates), 0, spec.t, cfg.tol);
      for (std::size_t s : gs.inverse_classes()) {
        for (double delta : cfg.deltas) {
          const auto after = transition_distribution(
              RateGraph::from_cayley(*cg, rates.increased(gs, s, delta)), 0, spec.t, cfg.tol);
          const auto d = metric_deltas(before, after, cfg.p_grid);
          for (std::size_t i = 0; i < cfg.p_grid.size(); ++i) {
            if (cfg.p_grid[i] == 2.0) out.max_p2 = std::max(out.max_p2, d.lp[i]);
            if (std::isinf(cfg.p_grid[i])) out.max_pinf = std::max(out.max_pinf, d.lp[i]);
          }
          if (std::none_of(d.lp.begin(), d.lp.end(), [](double v) { return v > kDeltaFloor; })) continue;
          // re-verify at a tighter tolerance before storing
          const auto check = perturb_metric_deltas(*cg, rates, s, delta, spec.t, cfg.p_grid, 1e-14);
          if (std::none_of(check.lp.begin(), check.lp.end(), [](double v) { return v > kDeltaFloor; })) continue;
          FoundExample ex;
          ex.family = cfg.family;
          ex.n = spec.n;
          ex.order = grp.group.order();
          for (const auto& gen : gs) {
            ex.labels.push_back(gen.label);
            ex.generators.push_back(grp.group.permutation(gen.element).images());
          }
          ex.rates = rates.values();
          ex.t = spec.t;
          ex.perturbed = gs[s].label;
          ex.delta = delta;
          ex.p_grid = cfg.p_grid;
          ex.lp_deltas = check.lp;
          ex.entropy_delta = check.entropy;
          ex.sample = index;
          out.found.push_back(std::move(ex));
        }
      }
    });
    for (auto& o : outcomes) {
      ++result.evaluated;
      if (o.rejected) ++result.rejected;
      result.max_delta_p2 = std::max(result.max_delta_p2, o.max_p2);
      result.max_delta_pinf = std::max(result.max_delta_pinf, o.max_pinf);
      for (auto& ex : o.found) {
        result.examples.push_back(std::move(ex));
        if (cfg.max_examples && result.examples.size() >= cfg.max_examples) return result;
      }
    }
  }
  result.budget_exhausted = true;
  return result;
}

// ---------------------------------------------------------------------------
// Catalogue

struct CatalogCheck {
  std::string name;
  std::vector<std::pair<std::string, double>> values;
  bool passed = false;
};

struct CatalogReport {
  std::vector<CatalogCheck> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CatalogCheck& c) { return c.passed; });
  }
};

/// Mean over all starting vertices of the entropy of p_t(x, .) on the star
/// with the given leaf-edge rates.
inline double star_mean_entropy(const std::vector<double>& leaf_rates, double t, double tol = kDefaultTol) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < leaf_rates.size(); ++i) edges.push_back({0, i + 1, leaf_rates[i]});
  const RateGraph g(leaf_rates.size() + 1, edges);
  double sum = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) sum += entropy(transition_distribution(g, x, t, tol).values());
  return sum / static_cast<double>(g.size());
}

/// Z/2n generated by +-2 and every odd residue.
inline GeneratedGroup even_odd_cyclic(std::size_t n) {
  std::vector<long long> steps{2};
  for (long long k = 1; k <= static_cast<long long>(n); k += 2) steps.push_back(k);
  return cyclic_group(2 * n, steps);
}

inline RateAssignment even_odd_rates(const GeneratedGroup& g, double even_rate, double odd_rate) {
  std::vector<double> r;
  for (const auto& gen : g.generators)
    r.push_back(cyclic_residue(g.group, gen.element) % 2 == 0 ? even_rate : odd_rate);
  return RateAssignment(g.generators, std::move(r));
}

inline CatalogReport catalog_reproductions(std::uint64_t seed = 1, double tol = kDefaultTol) {
  CatalogReport rep;

  {  // star with 6 vertices, one heavy edge
    const double a = star_mean_entropy({10, 1, 1, 1, 1}, 1.0, tol);
    const double b = star_mean_entropy({20, 1, 1, 1, 1}, 1.0, tol);
    CatalogCheck c{"star-entropy", {{"rate10", a}, {"rate20", b}}, false};
    c.passed = std::abs(a - 1.626355024) <= 1e-8 && std::abs(b - 1.626293845) <= 1e-8 && b < a;
    rep.checks.push_back(c);
  }
  {  // Z/8 with +-1, +-2, +-3: slow odd steps make 4 likelier than 3
    const auto g = cyclic_group(8, {1, 2, 3});
    const auto cg = g.cayley();
    const auto rates = RateAssignment::from_labels(g.generators, {{"+1", 0.05}, {"+3", 0.05}, {"+2", 1.0}});
    const auto d = transition_distribution(RateGraph::from_cayley(cg, rates), 0, 2.0, tol);
    const double p4 = d[cyclic_element(g.group, 4)], p3 = d[cyclic_element(g.group, 3)];
    CatalogCheck c{"mod8-inversion", {{"p4", p4}, {"p3", p3}, {"dist4", double(cg.distance(cyclic_element(g.group, 4)))},
                                      {"dist3", double(cg.distance(cyclic_element(g.group, 3)))}}, false};
    c.passed = p4 > p3 + kStrictMargin;
    rep.checks.push_back(c);
  }
  {  // Z/20: expected distance overshoots its limit
    const std::size_t n = 10;
    const auto g = even_odd_cyclic(n);
    const auto cg = g.cayley();
    const auto graph = RateGraph::from_cayley(cg, even_odd_rates(g, 100.0, 0.01));
    const double early = expected_distance(cg, transition_distribution(graph, 0, 0.05, tol));
    const double late = expected_distance(cg, transition_distribution(graph, 0, 200.0, tol));
    const double limit = 1.5 - 2.0 / static_cast<double>(n);
    CatalogCheck c{"mod2n-overshoot", {{"early", early}, {"late", late}, {"limit", limit}}, false};
    c.passed = early > limit + kStrictMargin && std::abs(late - limit) <= 0.01;
    rep.checks.push_back(c);
  }
  {  // S_4, all transpositions: raising the whole class majorizes downward
    std::vector<Permutation> perms;
    std::vector<std::string> labels;
    for (std::uint32_t i = 0; i < 4; ++i)
      for (std::uint32_t j = i + 1; j < 4; ++j) {
        std::vector<std::uint32_t> img{0, 1, 2, 3};
        std::swap(img[i], img[j]);
        perms.emplace_back(img);
        labels.push_back("t" + std::to_string(i) + std::to_string(j));
      }
    const auto g = permutation_group(perms, labels);
    const auto cg = g.cayley();
    CounterRng rng(seed, 0);
    std::vector<double> base;
    for (std::size_t i = 0; i < g.generators.size(); ++i) base.push_back(rng.uniform(1.0, 10.0));
    auto raised = base;
    for (auto& r : raised) r += 0.5;
    const auto before = transition_distribution(RateGraph::from_cayley(cg, RateAssignment(g.generators, base)), 0,
                                                1.0, tol);
    const auto after = transition_distribution(RateGraph::from_cayley(cg, RateAssignment(g.generators, raised)), 0,
                                               1.0, tol);
    const auto v = majorizes(before, after, 1e-12);
    CatalogCheck c{"conjugacy-class", {{"worst_margin", v.worst_margin}, {"best_margin", v.best_margin}}, false};
    c.passed = v.verdict == Majorization::StrictlyMajorizes;
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace crw
