#pragma once

// JSON configuration: group specifications, rate maps, and a reader that
// reports schema errors with JSON-pointer paths and records every value it
// resolves (defaults included) so runs can be reproduced from the record.
//
// Group specification:
//   {"family": "cyclic",    "n": 8, "steps": [1, 2, 3]}
//   {"family": "dihedral",  "n": 5}
//   {"family": "dicyclic",  "n": 3}
//   {"family": "symmetric", "n": 4}
//   {"family": "permutation", "generators": [[1, 2, 0], ...], "labels": ["a", ...]}
//   {"family": "coxeter", "matrix": [[1, 3], [3, 1]]}   ("inf" allowed as an entry)
//   {"family": "coxeter", "type": "B", "rank": 3}        (A, B, D by rank; I2 with "m")
//   {"family": "product", "factors": [spec, spec, ...]}
// Rates: {"rates": {"label": value, ...}, "default_rate": value}; a label's
// inverse inherits its rate unless given separately.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "crw/coxeter.hpp"
#include "crw/error.hpp"
#include "crw/group.hpp"
#include "crw/search.hpp"

namespace crw {

using Json = nlohmann::ordered_json;

class ConfigReader {
 public:
  explicit ConfigReader(const Json& node, std::string path = "") : node_(&node), path_(std::move(path)) {
    if (!node_->is_object()) fail("expected an object");
    resolved_ = Json::object();
  }

  const std::string& path() const noexcept { return path_; }
  std::string child_path(std::string_view key) const {
    std::string escaped;
    for (char c : key) {
      if (c == '~')
        escaped += "~0";
      else if (c == '/')
        escaped += "~1";
      else
        escaped += c;
    }
    return path_ + "/" + escaped;
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(path_, msg); }
  [[noreturn]] static void fail_at(const std::string& path, const std::string& msg) {
    throw Error(ErrorKind::ConfigError, (path.empty() ? std::string("/") : path) + ": " + msg);
  }

  bool has(std::string_view key) const { return node_->contains(key); }
  const Json& raw(std::string_view key) const {
    if (!has(key)) fail_at(child_path(key), "required key is missing");
    return node_->at(std::string(key));
  }

  double number(std::string_view key, std::optional<double> fallback = std::nullopt) {
    double v = 0.0;
    if (!has(key)) {
      if (!fallback) fail_at(child_path(key), "required number is missing");
      v = *fallback;
    } else {
      v = as_number(raw(key), child_path(key));
    }
    record(key, v);
    return v;
  }

  std::size_t count(std::string_view key, std::optional<std::size_t> fallback = std::nullopt) {
    std::size_t v = 0;
    if (!has(key)) {
      if (!fallback) fail_at(child_path(key), "required integer is missing");
      v = *fallback;
    } else {
      const auto& j = raw(key);
      if (!j.is_number_integer() || j.get<long long>() < 0) fail_at(child_path(key), "expected a nonnegative integer");
      v = j.get<std::size_t>();
    }
    record(key, v);
    return v;
  }

  std::string string(std::string_view key, std::optional<std::string> fallback = std::nullopt) {
    std::string v;
    if (!has(key)) {
      if (!fallback) fail_at(child_path(key), "required string is missing");
      v = *fallback;
    } else {
      const auto& j = raw(key);
      if (!j.is_string()) fail_at(child_path(key), "expected a string");
      v = j.get<std::string>();
    }
    record(key, v);
    return v;
  }

  bool boolean(std::string_view key, bool fallback) {
    bool v = fallback;
    if (has(key)) {
      const auto& j = raw(key);
      if (!j.is_boolean()) fail_at(child_path(key), "expected a boolean");
      v = j.get<bool>();
    }
    record(key, v);
    return v;
  }

  std::vector<double> numbers(std::string_view key, std::optional<std::vector<double>> fallback = std::nullopt) {
    std::vector<double> v;
    if (!has(key)) {
      if (!fallback) fail_at(child_path(key), "required array is missing");
      v = *fallback;
    } else {
      const auto& j = raw(key);
      if (!j.is_array()) fail_at(child_path(key), "expected an array of numbers");
      for (std::size_t i = 0; i < j.size(); ++i) v.push_back(as_number(j[i], child_path(key) + "/" + std::to_string(i)));
    }
    Json rec = Json::array();
    for (double x : v) rec.push_back(number_json(x));
    resolved_[std::string(key)] = rec;
    return v;
  }

  std::vector<std::size_t> counts(std::string_view key, std::optional<std::vector<std::size_t>> fallback = std::nullopt) {
    std::vector<std::size_t> v;
    if (!has(key)) {
      if (!fallback) fail_at(child_path(key), "required array is missing");
      v = *fallback;
    } else {
      const auto& j = raw(key);
      if (!j.is_array()) fail_at(child_path(key), "expected an array of integers");
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer() || j[i].get<long long>() < 0)
          fail_at(child_path(key) + "/" + std::to_string(i), "expected a nonnegative integer");
        v.push_back(j[i].get<std::size_t>());
      }
    }
    resolved_[std::string(key)] = v;
    return v;
  }

  std::vector<std::string> strings(std::string_view key, std::optional<std::vector<std::string>> fallback = std::nullopt) {
    std::vector<std::string> v;
    if (!has(key)) {
      if (!fallback) fail_at(child_path(key), "required array is missing");
      v = *fallback;
    } else {
      const auto& j = raw(key);
      if (!j.is_array()) fail_at(child_path(key), "expected an array of strings");
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string()) fail_at(child_path(key) + "/" + std::to_string(i), "expected a string");
        v.push_back(j[i].get<std::string>());
      }
    }
    resolved_[std::string(key)] = v;
    return v;
  }

  /// Nested object; its resolved record is merged back by `adopt`.
  ConfigReader object(std::string_view key) const {
    const auto& j = raw(key);
    if (!j.is_object()) fail_at(child_path(key), "expected an object");
    return ConfigReader(j, child_path(key));
  }
  void adopt(std::string_view key, const ConfigReader& child) { resolved_[std::string(key)] = child.resolved(); }
  void record_raw(std::string_view key, Json value) { resolved_[std::string(key)] = std::move(value); }

  /// Keys that were never read.
  std::vector<std::string> unused() const {
    std::vector<std::string> out;
    for (auto it = node_->begin(); it != node_->end(); ++it)
      if (!resolved_.contains(it.key())) out.push_back(it.key());
    return out;
  }
  void reject_unknown() const {
    auto u = unused();
    if (!u.empty()) fail_at(child_path(u.front()), "unknown key");
  }

  const Json& resolved() const noexcept { return resolved_; }

  static Json number_json(double v) {
    if (std::isinf(v)) return v > 0 ? Json("inf") : Json("-inf");
    return Json(v);
  }

 private:
  static double as_number(const Json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    }
    fail_at(path, "expected a number");
  }

  template <class V>
  void record(std::string_view key, const V& v) {
    if constexpr (std::is_same_v<V, double>)
      resolved_[std::string(key)] = number_json(v);
    else
      resolved_[std::string(key)] = v;
  }

  const Json* node_;
  std::string path_;
  Json resolved_;
};

/// A parsed group: the realisation, plus the Coxeter data when relevant.
struct GroupSpec {
  GeneratedGroup system;
  std::optional<CoxeterRealization> coxeter;
  std::string name;
  Json resolved;
};

namespace detail {

inline CoxeterMatrix parse_coxeter_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) ConfigReader::fail_at(path, "expected a square array");
  const std::size_t k = j.size();
  std::vector<std::vector<unsigned>> m(k, std::vector<unsigned>(k));
  for (std::size_t a = 0; a < k; ++a) {
    const auto row_path = path + "/" + std::to_string(a);
    if (!j[a].is_array() || j[a].size() != k) ConfigReader::fail_at(row_path, "expected a row of length " + std::to_string(k));
    for (std::size_t b = 0; b < k; ++b) {
      const auto& e = j[a][b];
      const auto cell = row_path + "/" + std::to_string(b);
      if (e.is_string() && (e.get<std::string>() == "inf" || e.get<std::string>() == "infinity"))
        m[a][b] = CoxeterMatrix::kInfinity;
      else if (e.is_number_integer() && e.get<long long>() >= 1)
        m[a][b] = e.get<unsigned>();
      else
        ConfigReader::fail_at(cell, "expected a positive integer or \"inf\"");
    }
  }
  try {
    return CoxeterMatrix(std::move(m));
  } catch (const Error& e) {
    ConfigReader::fail_at(path, e.what());
  }
}

inline Json coxeter_matrix_json(const CoxeterMatrix& m) {
  Json rows = Json::array();
  for (const auto& r : m.rows()) {
    Json row = Json::array();
    for (unsigned v : r) row.push_back(v == CoxeterMatrix::kInfinity ? Json("inf") : Json(v));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

inline GroupSpec parse_group(const Json& node, const std::string& path = "", std::size_t cap = kDefaultGroupCap) {
  ConfigReader r(node, path);
  const std::string family = r.string("family");
  GroupSpec out;
  try {
    if (family == "cyclic" || family == "dihedral" || family == "dicyclic" || family == "symmetric") {
      const std::size_t n = r.count("n");
      std::vector<long long> steps{1};
      if (family == "cyclic" && r.has("steps")) {
        const auto& j = r.raw("steps");
        if (!j.is_array() || j.empty()) ConfigReader::fail_at(r.child_path("steps"), "expected a nonempty integer array");
        steps.clear();
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (!j[i].is_number_integer())
            ConfigReader::fail_at(r.child_path("steps") + "/" + std::to_string(i), "expected an integer");
          steps.push_back(j[i].get<long long>());
        }
      }
      if (family == "cyclic") r.record_raw("steps", steps);
      out.system = builtin_group(parse_family(family), n, steps);
      out.name = family + " " + std::to_string(n);
    } else if (family == "permutation") {
      const auto& j = r.raw("generators");
      if (!j.is_array() || j.empty()) ConfigReader::fail_at(r.child_path("generators"), "expected a nonempty array");
      std::vector<Permutation> perms;
      for (std::size_t i = 0; i < j.size(); ++i) {
        const auto p = r.child_path("generators") + "/" + std::to_string(i);
        if (!j[i].is_array()) ConfigReader::fail_at(p, "expected an array of images");
        std::vector<std::uint32_t> img;
        for (const auto& v : j[i]) {
          if (!v.is_number_integer() || v.get<long long>() < 0) ConfigReader::fail_at(p, "images must be nonnegative integers");
          img.push_back(v.get<std::uint32_t>());
        }
        try {
          perms.emplace_back(std::move(img));
        } catch (const Error& e) {
          ConfigReader::fail_at(p, e.message());
        }
      }
      r.record_raw("generators", j);
      std::vector<std::string> labels = r.strings("labels", std::vector<std::string>{});
      out.system = permutation_group(perms, labels, cap);
      out.name = "permutation group of order " + std::to_string(out.system.group.order());
    } else if (family == "coxeter") {
      CoxeterMatrix m = CoxeterMatrix::type_a(1);
      if (r.has("matrix")) {
        m = detail::parse_coxeter_matrix(r.raw("matrix"), r.child_path("matrix"));
      } else {
        const std::string type = r.string("type");
        if (type == "I2") {
          m = CoxeterMatrix::dihedral(static_cast<unsigned>(r.count("m")));
        } else {
          const std::size_t rank = r.count("rank");
          if (type == "A")
            m = CoxeterMatrix::type_a(rank);
          else if (type == "B")
            m = CoxeterMatrix::type_b(rank);
          else if (type == "D")
            m = CoxeterMatrix::type_d(rank);
          else
            ConfigReader::fail_at(r.child_path("type"), "type must be A, B, D or I2");
        }
      }
      r.record_raw("matrix", detail::coxeter_matrix_json(m));
      out.coxeter = coxeter_group(m, cap);
      out.system = out.coxeter->system;
      out.name = out.coxeter->name();
    } else if (family == "product") {
      const auto& j = r.raw("factors");
      if (!j.is_array() || j.empty()) ConfigReader::fail_at(r.child_path("factors"), "expected a nonempty array");
      Json resolved = Json::array();
      std::optional<GeneratedGroup> acc;
      for (std::size_t i = 0; i < j.size(); ++i) {
        auto f = parse_group(j[i], r.child_path("factors") + "/" + std::to_string(i), cap);
        resolved.push_back(f.resolved);
        acc = acc ? direct_product(*acc, f.system, cap) : f.system;
        out.name += (i ? " x " : "") + f.name;
      }
      r.record_raw("factors", resolved);
      out.system = *acc;
    } else {
      ConfigReader::fail_at(r.child_path("family"), "unsupported family '" + family + "'");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    ConfigReader::fail_at(path, e.what());
  }
  r.reject_unknown();
  out.resolved = r.resolved();
  // a named type resolves to its matrix alone, so the record parses back
  if (out.coxeter) out.resolved = Json{{"family", "coxeter"}, {"matrix", r.resolved()["matrix"]}};
  return out;
}

/// Rates from {"rates": {...}, "default_rate": x} on the reader's object.
inline RateAssignment parse_rates(ConfigReader& r, const GeneratorSet& gens, std::optional<double> fallback = 1.0) {
  std::map<std::string, double> by_label;
  if (r.has("rates")) {
    const auto& j = r.raw("rates");
    if (!j.is_object()) ConfigReader::fail_at(r.child_path("rates"), "expected an object of label: rate");
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto p = r.child_path("rates") + "/" + it.key();
      if (!it.value().is_number()) ConfigReader::fail_at(p, "expected a number");
      if (!gens.find(it.key())) ConfigReader::fail_at(p, "unknown generator label");
      by_label[it.key()] = it.value().get<double>();
    }
  }
  std::optional<double> def = fallback;
  if (r.has("default_rate") || fallback) def = r.number("default_rate", fallback);
  try {
    auto rates = RateAssignment::from_labels(gens, by_label, def);
    Json rec = Json::object();
    for (std::size_t i = 0; i < gens.size(); ++i) rec[gens[i].label] = rates[i];
    r.record_raw("rates", rec);
    return rates;
  } catch (const Error& e) {
    r.fail(e.message());
  }
}

// ---------------------------------------------------------------------------
// Search archive records

inline Json to_json(const FoundExample& ex) {
  Json j = Json::object();
  j["family"] = std::string(to_string(ex.family));
  j["n"] = ex.n;
  j["order"] = ex.order;
  j["labels"] = ex.labels;
  j["generators"] = ex.generators;
  j["rates"] = ex.rates;
  j["t"] = ex.t;
  j["perturbed"] = ex.perturbed;
  j["delta"] = ex.delta;
  Json grid = Json::array();
  for (double p : ex.p_grid) grid.push_back(ConfigReader::number_json(p));
  j["p_grid"] = grid;
  j["lp_deltas"] = ex.lp_deltas;
  j["entropy_delta"] = ex.entropy_delta;
  Json iv = Json::array();
  for (const auto& i : ex.intervals) iv.push_back({i.lo, i.hi});
  j["intervals"] = iv;
  j["sample"] = ex.sample;
  return j;
}

inline FoundExample found_example_from_json(const Json& j) {
  ConfigReader r(j);
  FoundExample ex;
  ex.family = parse_family(r.string("family"));
  ex.n = r.count("n");
  ex.order = r.count("order");
  ex.labels = r.strings("labels");
  const auto& gens = r.raw("generators");
  if (!gens.is_array()) ConfigReader::fail_at("/generators", "expected an array");
  for (const auto& g : gens) ex.generators.push_back(g.get<std::vector<std::uint32_t>>());
  r.record_raw("generators", gens);
  ex.rates = r.numbers("rates");
  ex.t = r.number("t");
  ex.perturbed = r.string("perturbed");
  ex.delta = r.number("delta");
  ex.p_grid = r.numbers("p_grid");
  ex.lp_deltas = r.numbers("lp_deltas");
  ex.entropy_delta = r.number("entropy_delta");
  if (r.has("intervals"))
    for (const auto& i : r.raw("intervals")) ex.intervals.push_back({i.at(0).get<double>(), i.at(1).get<double>()});
  ex.sample = r.count("sample", 0);
  return ex;
}

}  // namespace crw
