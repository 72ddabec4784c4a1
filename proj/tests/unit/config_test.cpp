#include <gtest/gtest.h>

#include "crw/config.hpp"

using namespace crw;

namespace {

std::string config_error(const Json& j) {
  try {
    parse_group(j);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
    return e.message();
  }
  ADD_FAILURE() << "expected a config error for " << j.dump();
  return {};
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

TEST(ParseGroup, BuiltinFamilies) {
  EXPECT_EQ(parse_group(Json::parse(R"({"family": "cyclic", "n": 8, "steps": [1, 2, 3]})")).system.group.order(), 8u);
  EXPECT_EQ(parse_group(Json::parse(R"({"family": "dicyclic", "n": 3})")).system.group.order(), 12u);
  EXPECT_EQ(parse_group(Json::parse(R"({"family": "coxeter", "type": "B", "rank": 3})")).system.group.order(), 48u);
  EXPECT_EQ(parse_group(Json::parse(R"({"family": "coxeter", "type": "I2", "m": 5})")).system.group.order(), 10u);
  const auto prod = parse_group(Json::parse(
      R"({"family": "product", "factors": [{"family": "symmetric", "n": 3}, {"family": "cyclic", "n": 2}]})"));
  EXPECT_EQ(prod.system.group.order(), 12u);
  const auto perm = parse_group(Json::parse(R"({"family": "permutation", "generators": [[1, 0, 2], [0, 2, 1]]})"));
  EXPECT_EQ(perm.system.group.order(), 6u);
}

TEST(ParseGroup, ErrorsCarryPointerPaths) {
  EXPECT_TRUE(starts_with(config_error(Json::parse(R"({"n": 3})")), "/family: "));
  EXPECT_TRUE(starts_with(config_error(Json::parse(R"({"family": "cyclic", "n": 8, "bogus": 1})")), "/bogus: "));
  EXPECT_TRUE(starts_with(config_error(Json::parse(R"({"family": "cyclic", "n": 8, "steps": [1, "x"]})")),
                          "/steps/1: "));
  EXPECT_TRUE(starts_with(config_error(Json::parse(R"({"family": "permutation", "generators": [[0, 1], [0, 0]]})")),
                          "/generators/1: "));
  EXPECT_TRUE(starts_with(
      config_error(Json::parse(R"({"family": "product", "factors": [{"family": "cyclic", "n": 2}, {"family": "x"}]})")),
      "/factors/1/family: "));
  EXPECT_TRUE(starts_with(config_error(Json::parse(R"({"family": "coxeter", "type": "H", "rank": 3})")), "/type: "));
  // errors from the library are reported at the group's path
  EXPECT_TRUE(starts_with(config_error(Json::parse(R"({"family": "coxeter", "matrix": [[1, 5, 2], [5, 1, 3], [2, 3, 1]]})")),
                          "/: "));
  EXPECT_THROW(parse_group(Json::array()), Error);
}

TEST(ParseGroup, ResolvedRecordParsesBack) {
  for (const char* text :
       {R"({"family": "cyclic", "n": 8, "steps": [1, 3]})", R"({"family": "coxeter", "type": "D", "rank": 4})",
        R"({"family": "product", "factors": [{"family": "coxeter", "type": "A", "rank": 2}, {"family": "dihedral", "n": 4}]})",
        R"({"family": "permutation", "generators": [[1, 2, 0]], "labels": ["c"]})"}) {
    const auto a = parse_group(Json::parse(text));
    const auto b = parse_group(a.resolved);
    EXPECT_EQ(a.resolved, b.resolved) << text;
    EXPECT_EQ(a.system.group.order(), b.system.group.order());
    ASSERT_EQ(a.system.generators.size(), b.system.generators.size());
    for (std::size_t i = 0; i < a.system.generators.size(); ++i)
      EXPECT_EQ(a.system.generators[i].label, b.system.generators[i].label);
  }
}

TEST(ParseRates, LabelsDefaultsAndInverses) {
  const auto g = cyclic_group(8, {1, 2});
  const Json node = Json::parse(R"({"rates": {"+1": 2.5}, "default_rate": 0.5})");
  ConfigReader r(node);
  const auto rates = parse_rates(r, g.generators);
  EXPECT_EQ(rates[*g.generators.find("+1")], 2.5);
  EXPECT_EQ(rates[*g.generators.find("-1")], 2.5);
  EXPECT_EQ(rates[*g.generators.find("+2")], 0.5);
  EXPECT_NO_THROW(r.reject_unknown());
  EXPECT_EQ(r.resolved()["rates"]["-2"], 0.5);

  const Json bad = Json::parse(R"({"rates": {"+5": 1.0}})");
  ConfigReader rb(bad);
  try {
    parse_rates(rb, g.generators);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(starts_with(e.message(), "/rates/+5: "));
  }
}

TEST(ConfigReader, DefaultsAreRecorded) {
  const Json node = Json::parse(R"({"a": 1.5, "inf": "inf"})");
  ConfigReader r(node, "/cfg");
  EXPECT_EQ(r.number("a"), 1.5);
  EXPECT_EQ(r.number("b", 2.0), 2.0);
  EXPECT_TRUE(std::isinf(r.number("inf")));
  EXPECT_EQ(r.count("n", 7), 7u);
  EXPECT_EQ(r.resolved()["b"], 2.0);
  EXPECT_EQ(r.resolved()["inf"], "inf");
  EXPECT_EQ(r.resolved()["n"], 7);
  try {
    r.number("missing");
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(starts_with(e.message(), "/cfg/missing: "));
  }
  EXPECT_EQ(r.child_path("a/b~c"), "/cfg/a~1b~0c");
}

TEST(ConfigReader, TypeErrors) {
  const Json node = Json::parse(R"({"x": "text", "n": -2, "list": [1, "a"]})");
  ConfigReader r(node);
  EXPECT_THROW(r.number("x"), Error);
  EXPECT_THROW(r.count("n"), Error);
  try {
    r.numbers("list");
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(starts_with(e.message(), "/list/1: ")) << e.message();
  }
}

TEST(FoundExampleRecord, RoundTripReproducesDeltas) {
  SearchConfig cfg;
  cfg.family = Family::Dihedral;
  cfg.sizes = {5};
  cfg.budget = 1500;
  cfg.max_examples = 1;
  auto res = random_search(cfg);
  ASSERT_EQ(res.examples.size(), 1u);
  auto ex = res.examples[0];
  ex.intervals = p_increase_interval(ex);
  const auto back = found_example_from_json(Json::parse(to_json(ex).dump()));
  EXPECT_EQ(back.labels, ex.labels);
  EXPECT_EQ(back.generators, ex.generators);
  EXPECT_EQ(back.rates, ex.rates);
  EXPECT_EQ(back.t, ex.t);
  EXPECT_EQ(back.delta, ex.delta);
  EXPECT_EQ(back.p_grid, ex.p_grid);
  EXPECT_EQ(back.lp_deltas, ex.lp_deltas);
  EXPECT_EQ(back.sample, ex.sample);
  ASSERT_EQ(back.intervals.size(), ex.intervals.size());
  for (std::size_t i = 0; i < ex.p_grid.size(); ++i)
    EXPECT_EQ(example_delta_at(back, ex.p_grid[i], 1e-14), ex.lp_deltas[i]) << ex.p_grid[i];
}
