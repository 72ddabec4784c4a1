// crw: command-line front end.
//
//   crw <subcommand> [--config FILE] [--out DIR] [--seed N] [--tol X] [--threads N]
//
// Exit codes: 0 success, 1 a checked mathematical property failed,
// 2 configuration or operational error.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "crw/crw.hpp"

namespace fs = std::filesystem;
using namespace crw;

namespace {

constexpr int kOk = 0;
constexpr int kPropertyFailed = 1;
constexpr int kConfigError = 2;

struct Run {
  fs::path out;
  std::uint64_t seed = 1;
  double tol = kDefaultTol;
  unsigned threads = 0;
  std::vector<std::string> outputs;

  std::ofstream open(const std::string& name) {
    std::ofstream f(out / name);
    if (!f) throw Error(ErrorKind::ConfigError, "cannot write " + (out / name).string());
    f << std::setprecision(17);
    outputs.push_back(name);
    return f;
  }
  void write_json(const std::string& name, const Json& j) {
    auto f = open(name);
    f << j.dump(2) << "\n";
  }
};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

Json num(double v) { return ConfigReader::number_json(v); }

SimMode parse_mode(const std::string& s, const std::string& path) {
  if (s == "direct") return SimMode::Direct;
  if (s == "refresh") return SimMode::Refresh;
  ConfigReader::fail_at(path, "mode must be \"direct\" or \"refresh\"");
}

// ---------------------------------------------------------------------------
// group

int cmd_group(ConfigReader& cfg, Run& run) {
  auto spec = parse_group(cfg.raw("group"), "/group");
  cfg.record_raw("group", spec.resolved);
  cfg.reject_unknown();
  const auto cg = spec.system.cayley();
  const auto& g = spec.system.group;

  Json gens = Json::array();
  for (std::size_t i = 0; i < cg.generators().size(); ++i) {
    const auto& s = cg.generators()[i];
    gens.push_back({{"label", s.label},
                    {"inverse", cg.generators()[s.inverse].label},
                    {"involution", cg.generators().is_involution(i)},
                    {"images", g.permutation(s.element).images()}});
  }
  std::vector<std::size_t> histogram(cg.diameter() + 1, 0);
  for (auto d : cg.distances()) ++histogram[d];
  Json j{{"name", spec.name},         {"order", g.order()},         {"degree", g.degree()},
         {"abelian", g.is_abelian()}, {"diameter", cg.diameter()}, {"distance_histogram", histogram},
         {"generators", gens}};
  if (spec.coxeter) j["coxeter_factors"] = spec.coxeter->name();
  run.write_json("group.json", j);

  auto csv = run.open("elements.csv");
  csv << "element,description,distance\n";
  for (Element x = 0; x < g.order(); ++x) csv << x << ",\"" << g.describe(x) << "\"," << cg.distance(x) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// coxeter-verify

int cmd_coxeter_verify(ConfigReader& cfg, Run& run) {
  std::vector<CoxeterRealization> systems;
  if (cfg.has("groups")) {
    const auto& arr = cfg.raw("groups");
    if (!arr.is_array()) ConfigReader::fail_at("/groups", "expected an array of group specifications");
    Json resolved = Json::array();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      auto spec = parse_group(arr[i], "/groups/" + std::to_string(i));
      if (!spec.coxeter) ConfigReader::fail_at("/groups/" + std::to_string(i), "expected a coxeter family");
      resolved.push_back(spec.resolved);
      systems.push_back(*spec.coxeter);
    }
    cfg.record_raw("groups", resolved);
  } else {
    const std::size_t max_order = cfg.count("max_order", 48);
    for (const auto& m : coxeter_catalogue(max_order)) systems.push_back(coxeter_group(m));
  }
  cfg.reject_unknown();

  Json reports = Json::array();
  auto csv = run.open("walls.csv");
  csv << "group,reflection,edges,separates,single_crossing,orbit_characterization,reflection_swaps_sides\n";
  bool ok = true;
  for (const auto& sys : systems) {
    const auto rep = verify_wall_axioms(sys);
    ok = ok && rep.passed();
    reports.push_back({{"name", rep.name},
                       {"order", rep.order},
                       {"reflections", rep.reflection_count},
                       {"bipartite", rep.bipartite},
                       {"passed", rep.passed()}});
    for (const auto& w : rep.walls)
      csv << rep.name << "," << w.reflection << "," << w.edge_count << "," << w.separates << "," << w.single_crossing << ","
          << w.orbit_characterization << "," << w.reflection_swaps_sides << "\n";
  }
  run.write_json("walls.json", {{"groups", reports}, {"passed", ok}});
  return ok ? kOk : kPropertyFailed;
}

// ---------------------------------------------------------------------------
// exact

int cmd_exact(ConfigReader& cfg, Run& run) {
  auto spec = parse_group(cfg.raw("group"), "/group");
  cfg.record_raw("group", spec.resolved);
  const auto cg = spec.system.cayley();
  const auto& g = spec.system.group;
  const auto rates = parse_rates(cfg, cg.generators());
  const auto times = cfg.numbers("times", std::vector<double>{1.0});
  const std::size_t start = cfg.count("start", 0);
  if (start >= g.order()) ConfigReader::fail_at("/start", "start element out of range");
  const auto ps = cfg.numbers("p", std::vector<double>{1.0, 2.0, kInf});
  const bool checks = cfg.boolean("checks", false);
  std::optional<std::pair<std::size_t, double>> perturb;
  if (cfg.has("perturb")) {
    auto p = cfg.object("perturb");
    const auto label = p.string("generator");
    const auto idx = cg.generators().find(label);
    if (!idx) ConfigReader::fail_at("/perturb/generator", "unknown generator label");
    perturb = {*idx, p.number("delta", 0.1)};
    p.reject_unknown();
    cfg.adopt("perturb", p);
  }
  if (checks && !spec.coxeter) ConfigReader::fail_at("/checks", "monotonicity checks need a coxeter family");
  cfg.reject_unknown();

  const auto graph = RateGraph::from_cayley(cg, rates);
  auto dist_csv = run.open("distribution.csv");
  dist_csv << "t,element,description,distance,probability\n";
  auto met_csv = run.open("metrics.csv");
  met_csv << "t,p,lp,linf,entropy,hellinger,expected_distance\n";
  Json per_time = Json::array();
  bool ok = true;
  std::optional<BruhatOrder> bruhat;
  if (checks) bruhat.emplace(cg);

  for (double t : times) {
    const auto d = transition_distribution(graph, start, t, run.tol);
    for (Element x = 0; x < g.order(); ++x)
      dist_csv << fmt(t) << "," << x << ",\"" << g.describe(x) << "\"," << cg.distance(x) << "," << fmt(d[x]) << "\n";
    const double ed = expected_distance(cg, d);
    for (double p : ps) {
      const auto m = stationarity_metrics(d, p);
      met_csv << fmt(t) << "," << num(p).dump() << "," << fmt(m.lp) << "," << fmt(m.linf) << "," << fmt(m.entropy)
              << "," << fmt(m.hellinger) << "," << fmt(ed) << "\n";
    }
    Json entry{{"t", t}, {"expected_distance", ed}, {"entropy", entropy(d.values())}};
    if (perturb) {
      const auto md = perturb_metric_deltas(cg, rates, perturb->first, perturb->second, t, ps, run.tol);
      Json deltas = Json::array();
      for (std::size_t i = 0; i < ps.size(); ++i) deltas.push_back({{"p", num(ps[i])}, {"delta", md.lp[i]}});
      entry["perturbation"] = {{"lp_deltas", deltas},
                               {"entropy_delta", md.entropy},
                               {"majorization", std::string(to_string(md.majorization))}};
    }
    if (checks && start == 0) {
      double worst = kInf;
      for (auto [x, y] : bruhat->strict_pairs()) worst = std::min(worst, d[x] - d[y]);
      bool major_ok = true;
      for (std::size_t s = 0; s < cg.generators().size(); ++s) {
        const auto after = transition_distribution(
            RateGraph::from_cayley(cg, rates.increased(cg.generators(), s, 0.1)), 0, t, run.tol);
        major_ok = major_ok && majorizes(d, after, 1e-12).verdict == Majorization::StrictlyMajorizes;
      }
      const bool bruhat_ok = bruhat->strict_pairs().empty() || worst > kStrictMargin;
      entry["checks"] = {{"bruhat_min_gap", num(worst)}, {"bruhat_ok", bruhat_ok}, {"rate_majorization_ok", major_ok}};
      ok = ok && bruhat_ok && major_ok;
    }
    per_time.push_back(entry);
  }
  run.write_json("exact.json", {{"group", spec.name}, {"order", g.order()}, {"times", per_time}, {"passed", ok}});
  return ok ? kOk : kPropertyFailed;
}

// ---------------------------------------------------------------------------
// discrete

bool is_proper_subsequence(const std::vector<std::string>& sub, const std::vector<std::string>& seq) {
  if (sub.size() >= seq.size()) return false;
  std::size_t i = 0;
  for (const auto& s : seq)
    if (i < sub.size() && sub[i] == s) ++i;
  return i == sub.size();
}

int cmd_discrete(ConfigReader& cfg, Run& run) {
  auto spec = parse_group(cfg.raw("group"), "/group");
  cfg.record_raw("group", spec.resolved);
  const auto cg = spec.system.cayley();
  const auto seq = cfg.strings("sequence");
  const auto compare = cfg.has("compare") ? std::optional(cfg.strings("compare")) : std::nullopt;
  cfg.reject_unknown();
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (!cg.generators().find(seq[i])) ConfigReader::fail_at("/sequence/" + std::to_string(i), "unknown generator label");

  const auto d = discrete_coin_distribution(cg, seq);
  std::optional<Distribution> c;
  if (compare) c = discrete_coin_distribution(cg, *compare);
  auto csv = run.open("discrete.csv");
  csv << "element,description,distance,probability" << (c ? ",compare_probability" : "") << "\n";
  for (Element x = 0; x < cg.order(); ++x) {
    csv << x << ",\"" << cg.group().describe(x) << "\"," << cg.distance(x) << "," << fmt(d[x]);
    if (c) csv << "," << fmt((*c)[x]);
    csv << "\n";
  }
  Json j{{"group", spec.name}, {"entropy", entropy(d.values())}};
  bool ok = true;
  if (c) {
    const auto v = majorizes(*c, d, 1e-12);
    const bool sub = is_proper_subsequence(*compare, seq);
    j["compare_majorizes_sequence"] = std::string(to_string(v.verdict));
    j["compare_is_proper_subsequence"] = sub;
    if (sub && spec.coxeter) {
      ok = v.verdict == Majorization::StrictlyMajorizes;
      j["expected"] = "StrictlyMajorizes";
    }
  }
  j["passed"] = ok;
  run.write_json("discrete.json", j);
  return ok ? kOk : kPropertyFailed;
}

// ---------------------------------------------------------------------------
// speed

using AnySpace = std::variant<CayleySpace, FreeProductSpace, PathSpace>;

AnySpace parse_space(const Json& node, const std::string& path, Json& resolved) {
  ConfigReader r(node, path);
  const auto type = r.string("type");
  std::optional<AnySpace> out;
  if (type == "free-coxeter") {
    const auto rates = r.numbers("rates");
    if (rates.size() < 2) ConfigReader::fail_at(r.child_path("rates"), "need at least two rates");
    auto grp = FreeProductGroup::free_coxeter(rates.size());
    std::vector<RateAssignment> ra;
    for (std::size_t i = 0; i < rates.size(); ++i)
      ra.push_back(RateAssignment::uniform(grp.factor(i).generators(), rates[i]));
    out.emplace(FreeProductSpace(std::move(grp), ra));
  } else if (type == "free-product") {
    const auto& arr = r.raw("factors");
    if (!arr.is_array() || arr.size() < 2) ConfigReader::fail_at(r.child_path("factors"), "need at least two factors");
    std::vector<CayleyGraph> factors;
    std::vector<RateAssignment> ra;
    Json res = Json::array();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      ConfigReader f(arr[i], r.child_path("factors") + "/" + std::to_string(i));
      auto spec = parse_group(f.raw("group"), f.child_path("group"));
      f.record_raw("group", spec.resolved);
      auto cg = spec.system.cayley();
      ra.push_back(parse_rates(f, cg.generators()));
      f.reject_unknown();
      factors.push_back(std::move(cg));
      res.push_back(f.resolved());
    }
    r.record_raw("factors", res);
    out.emplace(FreeProductSpace(FreeProductGroup(std::move(factors)), ra));
  } else if (type == "cayley") {
    auto spec = parse_group(r.raw("group"), r.child_path("group"));
    r.record_raw("group", spec.resolved);
    auto cg = spec.system.cayley();
    const auto rates = parse_rates(r, cg.generators());
    out.emplace(CayleySpace(std::move(cg), rates));
  } else if (type == "ray") {
    out.emplace(PathSpace(r.numbers("rates")));
  } else {
    ConfigReader::fail_at(r.child_path("type"), "type must be free-coxeter, free-product, cayley or ray");
  }
  r.reject_unknown();
  resolved = r.resolved();
  return std::move(*out);
}

Json estimate_json(const SpeedEstimate& e, std::uint64_t seed) {
  return {{"mean", e.mean}, {"se", e.standard_error}, {"T", e.horizon}, {"replicas", e.replicas}, {"seed", seed}};
}

int cmd_speed(ConfigReader& cfg, Run& run) {
  const auto task = cfg.string("task", "formula");
  if (task == "formula") {
    const auto rates = cfg.numbers("rates", std::vector<double>{1, 1, 1});
    cfg.reject_unknown();
    const auto sol = free_coxeter_speed(rates);
    Json j{{"rates", rates},          {"root", sol.root},         {"speed", sol.speed},
           {"speed_alt", sol.speed_alt}, {"residual", sol.residual}, {"iterations", sol.iterations}};
    if (rates.size() == 3 && rates[1] == 1.0 && rates[2] == 1.0) j["tree_closed_form"] = tree_speed_closed_form(rates[0]);
    run.write_json("speed.json", j);
    return kOk;
  }
  if (task == "grid") {
    const std::size_t p = cfg.count("p", 3);
    const auto grid = cfg.numbers("grid", std::vector<double>{0.5, 1, 2, 4});
    cfg.reject_unknown();
    const auto rows = speed_grid_scan(p, grid);
    auto csv = run.open("grid.csv");
    for (std::size_t i = 0; i < p; ++i) csv << "r" << i << ",";
    csv << "speed";
    for (std::size_t i = 0; i < p; ++i) csv << ",forward_diff" << i << ",second_diff" << i;
    csv << "\n";
    bool monotone = true;
    double min_forward = kInf;
    for (const auto& row : rows) {
      for (double r : row.rates) csv << fmt(r) << ",";
      csv << fmt(row.speed);
      for (std::size_t i = 0; i < p; ++i) {
        csv << "," << fmt(row.forward_difference[i]) << "," << fmt(row.second_difference[i]);
        if (std::isfinite(row.forward_difference[i])) {
          min_forward = std::min(min_forward, row.forward_difference[i]);
          monotone = monotone && row.forward_difference[i] > 1e-6;
        }
      }
      csv << "\n";
    }
    run.write_json("grid.json", {{"points", rows.size()}, {"min_forward_difference", num(min_forward)},
                                 {"strictly_increasing", monotone}});
    return monotone ? kOk : kPropertyFailed;
  }
  if (task == "mc" || task == "product") {
    SimConfig sim;
    sim.horizon = cfg.number("T", 2000.0);
    sim.replicas = cfg.count("replicas", 200);
    sim.mode = parse_mode(cfg.string("mode", "direct"), "/mode");
    sim.seed = run.seed;
    sim.threads = run.threads;
    if (task == "mc") {
      Json res;
      const auto space = parse_space(cfg.raw("space"), "/space", res);
      cfg.record_raw("space", res);
      const bool check = cfg.has("expect");
      const double expect = check ? cfg.number("expect") : 0.0;
      cfg.reject_unknown();
      const auto est = std::visit([&](const auto& s) { return speed_mc(s, sim); }, space);
      auto csv = run.open("replicas.csv");
      csv << "replica,speed\n";
      for (std::size_t i = 0; i < est.samples.size(); ++i) csv << i << "," << fmt(est.samples[i]) << "\n";
      Json j = estimate_json(est, sim.seed);
      bool ok = true;
      if (check) {
        ok = std::abs(est.mean - expect) <= 4.0 * est.standard_error;
        j["expect"] = expect;
        j["within_4se"] = ok;
      }
      run.write_json("speed.json", j);
      return ok ? kOk : kPropertyFailed;
    }
    const auto& arr = cfg.raw("factors");
    if (!arr.is_array() || arr.size() != 2) ConfigReader::fail_at("/factors", "expected two space specifications");
    Json ra, rb;
    const auto a = parse_space(arr[0], "/factors/0", ra);
    const auto b = parse_space(arr[1], "/factors/1", rb);
    cfg.record_raw("factors", Json::array({ra, rb}));
    cfg.reject_unknown();
    const auto ea = std::visit([&](const auto& s) { return speed_mc(s, sim); }, a);
    const auto eb = std::visit([&](const auto& s) { return speed_mc(s, sim); }, b);
    const auto ep = std::visit(
        [&](const auto& x, const auto& y) { return speed_mc(ProductSpace(x, y), sim); }, a, b);
    const auto rep = product_speed_check(ea, eb, ep);
    run.write_json("product.json", {{"factor_a", estimate_json(ea, sim.seed)},
                                    {"factor_b", estimate_json(eb, sim.seed)},
                                    {"product", estimate_json(ep, sim.seed)},
                                    {"expected", rep.expected},
                                    {"difference", rep.difference},
                                    {"band", rep.band},
                                    {"passed", rep.passed}});
    return rep.passed ? kOk : kPropertyFailed;
  }
  ConfigReader::fail_at("/task", "task must be formula, grid, mc or product");
}

// ---------------------------------------------------------------------------
// ray

int cmd_ray(ConfigReader& cfg, Run& run) {
  const auto task = cfg.string("task", "profile");
  if (task == "line") {
    LineExperimentConfig lc;
    lc.t_grid = cfg.numbers("t_grid", std::vector<double>{});
    lc.n = cfg.count("n", lc.n);
    lc.alpha = cfg.number("alpha", lc.alpha);
    lc.fast_rate = cfg.number("fast_rate", lc.fast_rate);
    lc.small_time = cfg.number("small_time", lc.small_time);
    lc.tol = run.tol;
    cfg.reject_unknown();
    const auto rep = line_experiments(lc);
    auto csv = run.open("line.csv");
    csv << "t,p00_high,p00_low\n";
    for (std::size_t i = 0; i < rep.t_grid.size(); ++i)
      csv << fmt(rep.t_grid[i]) << "," << fmt(rep.p00_high[i]) << "," << fmt(rep.p00_low[i]) << "\n";
    run.write_json("line.json", {{"violation_times", rep.violation_times},
                                 {"n", rep.n},
                                 {"k", rep.k},
                                 {"small_time_distance", rep.small_time_distance},
                                 {"large_time_distance", rep.large_time_distance},
                                 {"large_time_formula", rep.large_time_formula},
                                 {"ratio", rep.ratio},
                                 {"target_ratio", rep.target_ratio},
                                 {"relative_error", rep.relative_error},
                                 {"passed", rep.passed()}});
    return rep.passed() ? kOk : kPropertyFailed;
  }

  RayRates rates;
  rates.rates = cfg.numbers("rates");
  if (task == "km") {
    const std::size_t n = cfg.count("n", rates.rates.size());
    const double delta = cfg.number("delta", 0.5);
    const auto thetas = cfg.numbers("thetas", std::vector<double>{0.1, 1.0, 10.0});
    cfg.reject_unknown();
    if (n == 0 || n > rates.rates.size()) ConfigReader::fail_at("/n", "n must lie in [1, number of rates]");
    const auto spectrum = km_spectrum(rates.rates, n);
    RayRates finite;
    finite.rates.assign(rates.rates.begin(), rates.rates.begin() + static_cast<std::ptrdiff_t>(n));
    const auto graph = ray_graph(finite, n);
    const std::vector<std::size_t> target{n};
    Json laplace = Json::array();
    bool ok = true;
    for (double th : thetas) {
      const double a = km_laplace(spectrum, th), b = hitting_laplace(graph, target, 0, th);
      ok = ok && std::abs(a - b) <= 1e-9;
      laplace.push_back({{"theta", th}, {"spectral", a}, {"linear_solve", b}});
    }
    Json mono = Json::array();
    for (std::size_t j = 1; j <= n; ++j) {
      const auto r = km_monotonicity(rates.rates, n, j, delta, thetas);
      ok = ok && r.passed;
      mono.push_back({{"edge", j}, {"min_difference", r.min_difference}, {"passed", r.passed}});
    }
    run.write_json("km.json", {{"spectrum", spectrum}, {"laplace", laplace}, {"monotonicity", mono}, {"passed", ok}});
    return ok ? kOk : kPropertyFailed;
  }
  if (task == "occupation") {
    const auto states = cfg.counts("states", std::vector<std::size_t>{0, 1});
    if (states.size() != 2) ConfigReader::fail_at("/states", "expected two states");
    const double t = cfg.number("t", 1.0);
    const std::size_t replicas = cfg.count("replicas", 10000);
    const double level = cfg.number("level", 0.01);
    const auto expect = cfg.string("expect", "");
    cfg.reject_unknown();
    const PathSpace space(rates.rates);
    const std::vector<std::uint32_t> tracked{static_cast<std::uint32_t>(states[0]), static_cast<std::uint32_t>(states[1])};
    const auto samples = occupation_samples(space, tracked, t, replicas, run.seed, SimMode::Direct, run.threads);
    const auto v = dominance_test(samples[0], samples[1], level);
    auto csv = run.open("occupation.csv");
    csv << "replica,time_at_" << states[0] << ",time_at_" << states[1] << "\n";
    for (std::size_t i = 0; i < replicas; ++i) csv << i << "," << fmt(samples[0][i]) << "," << fmt(samples[1][i]) << "\n";
    const bool ok = expect.empty() || expect == to_string(v.verdict);
    run.write_json("occupation.json", {{"verdict", std::string(to_string(v.verdict))},
                                       {"forward_violation", v.forward_violation},
                                       {"reverse_violation", v.reverse_violation},
                                       {"band", v.band},
                                       {"seed", run.seed},
                                       {"passed", ok}});
    return ok ? kOk : kPropertyFailed;
  }

  rates.tail = cfg.number("tail", 0.0);
  const auto times = cfg.numbers("times", std::vector<double>{1.0});
  if (task == "profile") {
    cfg.reject_unknown();
    auto csv = run.open("profile.csv");
    csv << "t,i,probability\n";
    Json checks = Json::array();
    bool ok = true;
    for (double t : times) {
      const auto d = ray_distribution(rates, t, run.tol);
      for (std::size_t i = 0; i < d.size(); ++i) csv << fmt(t) << "," << i << "," << fmt(d[i]) << "\n";
      if (t > 0 && rates.first_zero() != RayRates::kUnbounded) {
        const auto rep = profile_checks(rates, t);
        ok = ok && rep.passed;
        checks.push_back({{"t", t},
                          {"first_zero", rep.first_zero},
                          {"min_relative_gap", rep.min_relative_gap},
                          {"worst_index", rep.worst_index},
                          {"passed", rep.passed}});
      }
    }
    run.write_json("ray.json", {{"checks", checks}, {"passed", ok}});
    return ok ? kOk : kPropertyFailed;
  }
  if (task == "sensitivity") {
    const double delta = cfg.number("delta", 0.1);
    const std::size_t last = rates.first_zero() == RayRates::kUnbounded ? 0 : rates.first_zero() - 1;
    if (last == 0) ConfigReader::fail_at("/rates", "sensitivity needs a finite ray with a positive first rate");
    std::vector<std::size_t> all(last);
    std::iota(all.begin(), all.end(), std::size_t{1});
    const auto edges = cfg.counts("edges", all);
    cfg.reject_unknown();
    auto csv = run.open("sensitivity.csv");
    csv << "t,j,i,cdf_delta\n";
    Json reports = Json::array();
    bool ok = true;
    for (double t : times) {
      for (std::size_t j : edges) {
        if (j < 1 || j > last) ConfigReader::fail_at("/edges", "edge index outside [1, i0)");
        const auto rep = rate_sensitivity(rates, t, j, delta);
        ok = ok && rep.passed();
        for (std::size_t i = 0; i < rep.cdf_delta.size(); ++i)
          csv << fmt(t) << "," << j << "," << i << "," << fmt(rep.cdf_delta[i]) << "\n";
        reports.push_back({{"t", t},
                           {"edge", j},
                           {"expected_distance_delta", rep.expected_distance_delta},
                           {"cdf_strict", rep.cdf_strict},
                           {"distance_strict", rep.distance_strict}});
      }
    }
    run.write_json("sensitivity.json", {{"delta", delta}, {"reports", reports}, {"passed", ok}});
    return ok ? kOk : kPropertyFailed;
  }
  ConfigReader::fail_at("/task", "task must be profile, sensitivity, km, occupation or line");
}

// ---------------------------------------------------------------------------
// search

int cmd_search(ConfigReader& cfg, Run& run) {
  SearchConfig sc;
  sc.family = parse_family(cfg.string("family", "dihedral"));
  sc.sizes = cfg.counts("sizes", sc.sizes);
  sc.generators = cfg.count("generators", sc.generators);
  sc.rate_min = cfg.number("rate_min", sc.rate_min);
  sc.rate_max = cfg.number("rate_max", sc.rate_max);
  sc.t_min = cfg.number("t_min", sc.t_min);
  sc.t_max = cfg.number("t_max", sc.t_max);
  sc.deltas = cfg.numbers("deltas", sc.deltas);
  sc.p_grid = cfg.numbers("p_grid", sc.p_grid);
  sc.budget = cfg.count("budget", sc.budget);
  sc.allow_duplicates = cfg.boolean("allow_duplicates", sc.allow_duplicates);
  sc.max_examples = cfg.count("max_examples", sc.max_examples);
  const double refine = cfg.number("refine_tol", 1e-3);
  cfg.reject_unknown();
  sc.seed = run.seed;
  sc.threads = run.threads;
  sc.tol = run.tol;

  auto result = random_search(sc);
  auto jsonl = run.open("examples.jsonl");
  auto csv = run.open("summary.csv");
  csv << "group,sample,perturbed,delta,t,p_lo,p_hi,max_lp_delta\n";
  bool ok = result.max_delta_p2 <= kDeltaFloor && result.max_delta_pinf <= kDeltaFloor;
  for (auto& ex : result.examples) {
    ex.intervals = p_increase_interval(ex, refine, sc.tol);
    jsonl << to_json(ex).dump() << "\n";
    const double max_delta = *std::max_element(ex.lp_deltas.begin(), ex.lp_deltas.end());
    const std::string name = std::string(to_string(ex.family)) + " " + std::to_string(ex.n);
    if (ex.intervals.empty()) {
      csv << name << "," << ex.sample << "," << ex.perturbed << "," << fmt(ex.delta) << "," << fmt(ex.t) << ",,,"
          << fmt(max_delta) << "\n";
    }
    for (const auto& iv : ex.intervals)
      csv << name << "," << ex.sample << "," << ex.perturbed << "," << fmt(ex.delta) << "," << fmt(ex.t) << ","
          << fmt(iv.lo) << "," << fmt(iv.hi) << "," << fmt(max_delta) << "\n";
    for (std::size_t i = 0; i < ex.p_grid.size(); ++i)
      if ((ex.p_grid[i] == 2.0 || std::isinf(ex.p_grid[i])) && ex.lp_deltas[i] > kDeltaFloor) ok = false;
  }
  run.write_json("search.json", {{"evaluated", result.evaluated},
                                 {"rejected", result.rejected},
                                 {"found", result.examples.size()},
                                 {"budget_exhausted", result.budget_exhausted},
                                 {"max_delta_p2", num(result.max_delta_p2)},
                                 {"max_delta_pinf", num(result.max_delta_pinf)},
                                 {"passed", ok}});
  return ok ? kOk : kPropertyFailed;
}

// ---------------------------------------------------------------------------
// catalog

Json catalog_json(const CatalogReport& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json values = Json::object();
    for (const auto& [k, v] : c.values) values[k] = v;
    checks.push_back({{"name", c.name}, {"values", values}, {"passed", c.passed}});
  }
  return {{"checks", checks}, {"passed", rep.passed()}};
}

int cmd_catalog(ConfigReader& cfg, Run& run) {
  cfg.reject_unknown();
  const auto rep = catalog_reproductions(run.seed, run.tol);
  run.write_json("catalog.json", catalog_json(rep));
  return rep.passed() ? kOk : kPropertyFailed;
}

// ---------------------------------------------------------------------------
// verify-all

Json suite_json(const SuiteReport& s) {
  return {{"name", s.name},
          {"cases", s.cases},
          {"failures", s.failures},
          {"worst_margin", num(s.worst_margin)},
          {"first_failure", s.first_failure},
          {"passed", s.passed()}};
}

int cmd_verify_all(ConfigReader& cfg, Run& run) {
  const std::size_t instances = cfg.count("instances", 3);
  cfg.reject_unknown();
  Json results = Json::array();
  bool ok = true;
  auto add = [&](const std::string& name, bool passed, Json detail) {
    ok = ok && passed;
    results.push_back({{"check", name}, {"passed", passed}, {"detail", std::move(detail)}});
    std::cout << (passed ? "PASS " : "FAIL ") << name << "\n";
  };

  {
    bool walls_ok = true;
    Json detail = Json::array();
    for (const auto& r : wall_axiom_catalogue(48)) {
      walls_ok = walls_ok && r.passed();
      detail.push_back({{"group", r.name}, {"passed", r.passed()}});
    }
    add("wall-axioms", walls_ok, detail);
  }
  for (const auto& m : {CoxeterMatrix::dihedral(5), CoxeterMatrix::type_a(3)}) {
    const auto real = coxeter_group(m);
    CoxeterSuiteConfig c;
    c.instances = instances;
    c.rate_min = 2.3;
    c.rate_max = 2.7;
    c.seed = run.seed;
    const auto [b, mj] = coxeter_monotonicity_suite(real, c);
    add("bruhat-monotonicity " + real.name(), b.passed(), suite_json(b));
    add("rate-majorization " + real.name(), mj.passed(), suite_json(mj));
    const auto rp = reflection_principle_suite(real, {0.5, 2.0}, 1, run.seed, 1e-9, run.tol, WallTime::WallRing);
    add("wall-ring-reflection " + real.name(), rp.passed(), suite_json(rp));
  }
  {
    DiscreteSuiteConfig c;
    c.trials = 10 * instances;
    c.seed = run.seed;
    c.strict = false;
    const auto s = discrete_majorization_suite(coxeter_group(CoxeterMatrix::type_a(3)), c);
    add("discrete-weak-majorization A3", s.passed(), suite_json(s));
  }
  {
    PinfSuiteConfig c;
    c.trials = 5 * instances;
    c.seed = run.seed;
    const auto r = pinf_suite(c);
    add("l2-linf-monotone", r.monotone.passed(), suite_json(r.monotone));
    add("l2-linf-identities", r.identities.passed(), suite_json(r.identities));
  }
  {
    const auto rep = catalog_reproductions(run.seed, run.tol);
    add("catalog", rep.passed(), catalog_json(rep));
  }
  {
    bool ray_ok = true;
    for (std::size_t inst = 0; inst < instances; ++inst) {
      CounterRng rng(run.seed, inst);
      RayRates r;
      for (int i = 0; i < 10; ++i) r.rates.push_back(rng.uniform(0.2, 5.0));
      for (double t : {0.5, 2.0}) {
        ray_ok = ray_ok && profile_checks(r, t).passed;
        for (std::size_t j = 1; j <= r.rates.size(); ++j) ray_ok = ray_ok && rate_sensitivity(r, t, j, 0.1).passed();
      }
    }
    add("ray-monotonicity", ray_ok, Json::object());
  }
  {
    bool km_ok = true;
    for (std::size_t n = 1; n <= 4; ++n) {
      CounterRng rng(run.seed, n);
      std::vector<double> rates;
      for (std::size_t i = 0; i < n; ++i) rates.push_back(rng.uniform(0.5, 3.0));
      const auto spec = km_spectrum(rates, n);
      const auto graph = ray_graph(RayRates{rates, 0.0}, n);
      const std::vector<std::size_t> target{n};
      for (double th : {0.1, 1.0, 10.0})
        km_ok = km_ok && std::abs(km_laplace(spec, th) - hitting_laplace(graph, target, 0, th)) <= 1e-9;
      for (std::size_t j = 1; j <= n; ++j) km_ok = km_ok && km_monotonicity(rates, n, j, 0.5).passed;
    }
    add("hitting-spectrum", km_ok, Json::object());
  }
  {
    bool speed_ok = true;
    for (double rho : {0.25, 0.5, 1.0, 2.0, 4.0})
      speed_ok = speed_ok && std::abs(tree_speed_closed_form(rho) -
                                      free_coxeter_speed(std::vector<double>{rho, 1.0, 1.0}).speed) <= 1e-9;
    add("tree-speed-formulas", speed_ok, Json::object());
  }
  {
    const auto rep = line_experiments();
    add("line-experiments", rep.passed(), {{"ratio", rep.ratio}, {"violations", rep.violation_times.size()}});
  }
  run.write_json("verify.json", {{"results", results}, {"passed", ok}});
  return ok ? kOk : kPropertyFailed;
}

// ---------------------------------------------------------------------------

using Handler = int (*)(ConfigReader&, Run&);

struct Options {
  std::string config;
  std::string out = "crw-out";
  std::uint64_t seed = 1;
  double tol = kDefaultTol;
  unsigned threads = 0;
};

int dispatch(const std::string& name, Handler handler, const Options& opt, const CLI::App& sub) {
  const auto began = std::chrono::steady_clock::now();
  Run run;
  run.out = opt.out;
  run.seed = opt.seed;
  run.tol = opt.tol;
  run.threads = opt.threads;

  Json config = Json::object();
  if (!opt.config.empty()) {
    std::ifstream in(opt.config);
    if (!in) throw Error(ErrorKind::ConfigError, "cannot read config file " + opt.config);
    config = Json::parse(in);
    if (config.is_object() && config.contains("manifest_version")) {
      // re-run from a manifest; explicit flags still win
      if (config.value("subcommand", "") != name)
        throw Error(ErrorKind::ConfigError, "/subcommand: manifest was written by '" +
                                                config.value("subcommand", "") + "', not '" + name + "'");
      if (sub.count("--seed") == 0) run.seed = config.at("seed").get<std::uint64_t>();
      if (sub.count("--tol") == 0) run.tol = config.at("tol").get<double>();
      if (sub.count("--threads") == 0) run.threads = config.at("threads").get<unsigned>();
      Json inner = config.at("config");
      config = std::move(inner);
    }
  }
  detail::check_tol(run.tol);
  fs::create_directories(run.out);

  ConfigReader reader(config);
  const int code = handler(reader, run);

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - began).count();
  Json manifest{{"manifest_version", 1},
                {"tool", "crw"},
                {"version", CRW_VERSION},
                {"subcommand", name},
                {"config", reader.resolved()},
                {"seed", run.seed},
                {"tol", run.tol},
                {"threads", run.threads},
                {"duration_seconds", seconds},
                {"exit_code", code},
                {"outputs", run.outputs}};
  std::ofstream mf(run.out / "manifest.json");
  mf << manifest.dump(2) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-time random walks with generator rates: exact laws, simulation and searches"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CRW_VERSION));

  const std::vector<std::tuple<std::string, std::string, Handler>> commands{
      {"group", "Build a group and its Cayley graph", cmd_group},
      {"coxeter-verify", "Check the wall lemmas on Coxeter systems", cmd_coxeter_verify},
      {"exact", "Exact transition laws, distances to uniform, monotonicity checks", cmd_exact},
      {"discrete", "Coin-flip distributions of generator sequences", cmd_discrete},
      {"speed", "Escape speeds: closed forms, grids, Monte Carlo", cmd_speed},
      {"ray", "Ray and line walks: profiles, sensitivities, spectra, occupation", cmd_ray},
      {"search", "Random search for rate increases that move away from uniform", cmd_search},
      {"catalog", "Fixed catalogue of known instances", cmd_catalog},
      {"verify-all", "Quick property suite over small groups", cmd_verify_all},
  };
  Options opt;
  std::vector<CLI::App*> subs;
  for (const auto& [name, help, _] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "JSON config file (or a manifest.json to re-run)");
    sub->add_option("--out", opt.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
    sub->add_option("--tol", opt.tol, "Truncation tolerance for exact computations")->capture_default_str();
    sub->add_option("--threads", opt.threads, "Worker threads (0: hardware concurrency)")->capture_default_str();
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      return dispatch(std::get<0>(commands[i]), std::get<2>(commands[i]), opt, *subs[i]);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kConfigError;
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error [json]: " << e.what() << "\n";
      return kConfigError;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kConfigError;
    }
  }
  return kConfigError;
}
