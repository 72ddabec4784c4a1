#pragma once

// Finite permutation groups, symmetric generating sets with rates, and
// right Cayley graphs with the word-length metric.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crw/error.hpp"

namespace crw {

using Element = std::uint32_t;

inline constexpr std::size_t kDefaultGroupCap = 20000;

/// A bijection of {0, ..., m-1}. Products compose left to right:
/// (p * q)(i) = q(p(i)), so the right regular action h -> h g is a
/// homomorphism under this convention.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (auto v : images_) {
      detail::require(v < images_.size() && !seen[v], ErrorKind::InvalidArgument,
                      "permutation images are not a bijection");
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t degree) {
    std::vector<std::uint32_t> img(degree);
    std::iota(img.begin(), img.end(), 0u);
    Permutation p;
    p.images_ = std::move(img);
    return p;
  }

  std::size_t degree() const noexcept { return images_.size(); }
  std::uint32_t operator()(std::size_t i) const { return images_[i]; }
  const std::vector<std::uint32_t>& images() const noexcept { return images_; }

  Permutation operator*(const Permutation& q) const {
    detail::require(degree() == q.degree(), ErrorKind::InvalidArgument,
                    "permutation degrees differ");
    Permutation r;
    r.images_.resize(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) r.images_[i] = q.images_[images_[i]];
    return r;
  }

  Permutation inverse() const {
    Permutation r;
    r.images_.resize(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) r.images_[images_[i]] = static_cast<std::uint32_t>(i);
    return r;
  }

  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  /// Cycle notation, e.g. "(0 1)(2 3)"; the identity prints as "()".
  std::string cycles() const {
    std::string out;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (seen[i] || images_[i] == i) continue;
      out += '(';
      std::size_t j = i;
      bool first = true;
      while (!seen[j]) {
        seen[j] = true;
        if (!first) out += ' ';
        out += std::to_string(j);
        first = false;
        j = images_[j];
      }
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint32_t> images_;
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto v : p.images()) {
      h ^= v;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Finite group realised by permutations. Element 0 is the identity and
/// elements are indexed in BFS order from the identity. Copies share the
/// same immutable storage.
class FiniteGroup {
 public:
  /// Groups up to this order keep a dense multiplication table.
  static constexpr std::size_t kDenseTableLimit = 4096;

  FiniteGroup() = default;

  std::size_t order() const noexcept { return impl_ ? impl_->elements.size() : 0; }
  std::size_t degree() const noexcept { return impl_ ? impl_->degree : 0; }
  static constexpr Element identity() noexcept { return 0; }

  Element multiply(Element a, Element b) const {
    const auto n = order();
    if (!impl_->table.empty()) return impl_->table[static_cast<std::size_t>(a) * n + b];
    return impl_->index.at(impl_->elements[a] * impl_->elements[b]);
  }

  Element inverse(Element a) const { return impl_->inverse[a]; }

  const Permutation& permutation(Element a) const { return impl_->elements[a]; }

  std::optional<Element> find(const Permutation& p) const {
    auto it = impl_->index.find(p);
    if (it == impl_->index.end()) return std::nullopt;
    return it->second;
  }

  std::string describe(Element a) const { return impl_->elements[a].cycles(); }

  bool is_abelian() const {
    for (Element a = 0; a < order(); ++a)
      for (Element b = a + 1; b < order(); ++b)
        if (multiply(a, b) != multiply(b, a)) return false;
    return true;
  }

 private:
  struct Impl {
    std::size_t degree = 0;
    std::vector<Permutation> elements;
    std::unordered_map<Permutation, Element, PermutationHash> index;
    std::vector<Element> inverse;
    std::vector<Element> table;
  };

  explicit FiniteGroup(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  friend FiniteGroup generate_group(std::span<const Permutation>, std::size_t);

  std::shared_ptr<const Impl> impl_;
};

/// Closure of `generators` under composition. Elements are numbered in BFS
/// order from the identity, trying generators in the order given.
inline FiniteGroup generate_group(std::span<const Permutation> generators,
                                  std::size_t cap = kDefaultGroupCap) {
  detail::require(!generators.empty(), ErrorKind::EmptyGenerators, "no generators given");
  const std::size_t degree = generators.front().degree();
  for (const auto& g : generators)
    detail::require(g.degree() == degree, ErrorKind::InvalidArgument,
                    "generators act on ground sets of different sizes");

  auto impl = std::make_shared<FiniteGroup::Impl>();
  impl->degree = degree;
  impl->elements.push_back(Permutation::identity(degree));
  impl->index.emplace(impl->elements.front(), 0);

  const std::size_t k = generators.size();
  std::vector<Element> right;  // right[x * k + g] = x * generators[g]
  std::vector<std::pair<Element, std::size_t>> parent{{0, 0}};
  for (std::size_t head = 0; head < impl->elements.size(); ++head) {
    for (std::size_t g = 0; g < k; ++g) {
      Permutation next = impl->elements[head] * generators[g];
      auto it = impl->index.find(next);
      if (it != impl->index.end()) {
        right.push_back(it->second);
        continue;
      }
      detail::require(impl->elements.size() < cap, ErrorKind::CapExceeded,
                      "group closure exceeds cap of " + std::to_string(cap) + " elements");
      const auto id = static_cast<Element>(impl->elements.size());
      impl->index.emplace(next, id);
      impl->elements.push_back(std::move(next));
      parent.emplace_back(static_cast<Element>(head), g);
      right.push_back(id);
    }
  }

  const std::size_t n = impl->elements.size();
  impl->inverse.resize(n);
  for (std::size_t i = 0; i < n; ++i) impl->inverse[i] = impl->index.at(impl->elements[i].inverse());
  if (n <= FiniteGroup::kDenseTableLimit) {
    // Row a: a * b = (a * parent(b)) * g, filled in BFS order of b.
    impl->table.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      Element* row = impl->table.data() + a * n;
      row[0] = static_cast<Element>(a);
      for (std::size_t b = 1; b < n; ++b) row[b] = right[row[parent[b].first] * k + parent[b].second];
    }
  }
  return FiniteGroup(std::move(impl));
}

inline FiniteGroup generate_group(const std::vector<Permutation>& generators,
                                  std::size_t cap = kDefaultGroupCap) {
  return generate_group(std::span<const Permutation>(generators), cap);
}

struct Generator {
  std::string label;
  Element element = 0;
  std::size_t inverse = 0;  // position of the inverse generator in the set
};

/// Symmetric labelled generating set. Every generator's inverse is present
/// (an involution is its own inverse); the identity is never a generator.
class GeneratorSet {
 public:
  GeneratorSet() = default;

  /// `allow_duplicate_elements` permits two labels for one element; labels
  /// themselves must always be unique.
  GeneratorSet(const FiniteGroup& group, std::vector<std::pair<std::string, Element>> gens,
               bool allow_duplicate_elements = false) {
    for (auto& [label, element] : gens) {
      detail::require(element < group.order(), ErrorKind::InvalidArgument,
                      "generator '" + label + "' is not a group element");
      detail::require(element != FiniteGroup::identity(), ErrorKind::InvalidArgument,
                      "generator '" + label + "' is the identity");
      for (const auto& g : gens_) {
        detail::require(g.label != label, ErrorKind::InvalidArgument,
                        "duplicate generator label '" + label + "'");
        detail::require(allow_duplicate_elements || g.element != element, ErrorKind::InvalidArgument,
                        "generators '" + g.label + "' and '" + label + "' are the same element");
      }
      gens_.push_back({label, element, 0});
    }
    std::vector<bool> paired(gens_.size(), false);
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (paired[i]) continue;
      const Element inv = group.inverse(gens_[i].element);
      std::optional<std::size_t> match;
      for (std::size_t j = i; j < gens_.size(); ++j) {
        if (!paired[j] && gens_[j].element == inv && (j != i || inv == gens_[i].element)) {
          match = j;
          break;
        }
      }
      detail::require(match.has_value(), ErrorKind::InvalidArgument,
                      "generating set is not closed under inverses: '" + gens_[i].label + "'");
      gens_[i].inverse = *match;
      gens_[*match].inverse = i;
      paired[i] = paired[*match] = true;
    }
  }

  /// Adds `label^-1` entries for non-involutions whose inverse is missing.
  static GeneratorSet with_inverses(const FiniteGroup& group,
                                    std::vector<std::pair<std::string, Element>> gens) {
    std::vector<std::pair<std::string, Element>> out = gens;
    for (const auto& [label, element] : gens) {
      const Element inv = group.inverse(element);
      bool present = std::any_of(out.begin(), out.end(), [&](const auto& g) { return g.second == inv; });
      if (!present) out.emplace_back(label + "^-1", inv);
    }
    return GeneratorSet(group, std::move(out));
  }

  std::size_t size() const noexcept { return gens_.size(); }
  bool empty() const noexcept { return gens_.empty(); }
  const Generator& operator[](std::size_t i) const { return gens_[i]; }
  auto begin() const noexcept { return gens_.begin(); }
  auto end() const noexcept { return gens_.end(); }

  bool is_involution(std::size_t i) const { return gens_[i].inverse == i; }

  std::optional<std::size_t> find(std::string_view label) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].label == label) return i;
    return std::nullopt;
  }

  std::size_t index_of(std::string_view label) const {
    auto i = find(label);
    detail::require(i.has_value(), ErrorKind::InvalidArgument,
                    "unknown generator label '" + std::string(label) + "'");
    return *i;
  }

  /// One representative (the lower position) per {s, s^-1} pair.
  std::vector<std::size_t> inverse_classes() const {
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].inverse >= i) reps.push_back(i);
    return reps;
  }

 private:
  std::vector<Generator> gens_;
};

/// Per-generator nonnegative rates with r_s = r_{s^-1}.
class RateAssignment {
 public:
  RateAssignment() = default;

  RateAssignment(const GeneratorSet& gens, std::vector<double> rates) : rates_(std::move(rates)) {
    detail::require(rates_.size() == gens.size(), ErrorKind::InvalidArgument,
                    "rate count does not match generator count");
    for (std::size_t i = 0; i < rates_.size(); ++i) {
      detail::require(rates_[i] >= 0.0 && std::isfinite(rates_[i]), ErrorKind::InvalidArgument,
                      "rate for '" + gens[i].label + "' must be finite and nonnegative");
      detail::require(rates_[i] == rates_[gens[i].inverse], ErrorKind::InvalidArgument,
                      "rates of '" + gens[i].label + "' and its inverse differ");
    }
  }

  static RateAssignment uniform(const GeneratorSet& gens, double rate) {
    return RateAssignment(gens, std::vector<double>(gens.size(), rate));
  }

  /// Labels not mentioned take their inverse's rate, or `fallback`.
  static RateAssignment from_labels(const GeneratorSet& gens, const std::map<std::string, double>& by_label,
                                    std::optional<double> fallback = std::nullopt) {
    for (const auto& [label, _] : by_label) gens.index_of(label);
    std::vector<double> rates(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
      auto it = by_label.find(gens[i].label);
      if (it == by_label.end()) it = by_label.find(gens[gens[i].inverse].label);
      if (it != by_label.end()) {
        rates[i] = it->second;
      } else {
        detail::require(fallback.has_value(), ErrorKind::InvalidArgument,
                        "no rate given for generator '" + gens[i].label + "'");
        rates[i] = *fallback;
      }
    }
    return RateAssignment(gens, std::move(rates));
  }

  std::size_t size() const noexcept { return rates_.size(); }
  double operator[](std::size_t i) const { return rates_[i]; }
  const std::vector<double>& values() const noexcept { return rates_; }
  double total() const { return std::accumulate(rates_.begin(), rates_.end(), 0.0); }

  /// Raises the rate of generator `i` and of its inverse by `delta`.
  RateAssignment increased(const GeneratorSet& gens, std::size_t i, double delta) const {
    auto r = rates_;
    r[i] += delta;
    if (gens[i].inverse != i) r[gens[i].inverse] += delta;
    return RateAssignment(gens, std::move(r));
  }

 private:
  std::vector<double> rates_;
};

/// Right Cayley graph: edge (x, x s) for each state x and generator s, with
/// BFS distances from the identity.
class CayleyGraph {
 public:
  CayleyGraph() = default;

  CayleyGraph(FiniteGroup group, GeneratorSet gens) : group_(std::move(group)), gens_(std::move(gens)) {
    const std::size_t n = group_.order();
    const std::size_t k = gens_.size();
    right_.resize(n * k);
    for (Element x = 0; x < n; ++x)
      for (std::size_t s = 0; s < k; ++s) right_[x * k + s] = group_.multiply(x, gens_[s].element);

    constexpr auto unseen = std::numeric_limits<std::uint32_t>::max();
    dist_.assign(n, unseen);
    dist_[0] = 0;
    std::deque<Element> queue{0};
    while (!queue.empty()) {
      const Element x = queue.front();
      queue.pop_front();
      for (std::size_t s = 0; s < k; ++s) {
        const Element y = right_[x * k + s];
        if (dist_[y] == unseen) {
          dist_[y] = dist_[x] + 1;
          queue.push_back(y);
        }
      }
    }
    const auto reached = std::count_if(dist_.begin(), dist_.end(), [](auto d) { return d != unseen; });
    detail::require(static_cast<std::size_t>(reached) == n, ErrorKind::NotGenerating,
                    "generators reach " + std::to_string(reached) + " of " + std::to_string(n) + " elements");
  }

  const FiniteGroup& group() const noexcept { return group_; }
  const GeneratorSet& generators() const noexcept { return gens_; }
  std::size_t order() const noexcept { return group_.order(); }

  Element neighbor(Element x, std::size_t generator) const { return right_[x * gens_.size() + generator]; }
  std::uint32_t distance(Element x) const { return dist_[x]; }
  const std::vector<std::uint32_t>& distances() const noexcept { return dist_; }
  std::uint32_t diameter() const { return *std::max_element(dist_.begin(), dist_.end()); }

  /// Graph distance between arbitrary states, via left invariance.
  std::uint32_t distance(Element x, Element y) const { return dist_[group_.multiply(group_.inverse(x), y)]; }

 private:
  FiniteGroup group_;
  GeneratorSet gens_;
  std::vector<Element> right_;
  std::vector<std::uint32_t> dist_;
};

inline CayleyGraph cayley_graph(const FiniteGroup& group, const GeneratorSet& gens) {
  return CayleyGraph(group, gens);
}

/// A group together with a generating set, as produced by the constructors below.
struct GeneratedGroup {
  FiniteGroup group;
  GeneratorSet generators;

  CayleyGraph cayley() const { return CayleyGraph(group, generators); }
};

enum class Family { Cyclic, Dihedral, Dicyclic, Symmetric };

constexpr std::string_view to_string(Family f) {
  switch (f) {
    case Family::Cyclic: return "cyclic";
    case Family::Dihedral: return "dihedral";
    case Family::Dicyclic: return "dicyclic";
    case Family::Symmetric: return "symmetric";
  }
  return "?";
}

namespace detail {

inline Permutation shift(std::size_t n, std::size_t k) {
  std::vector<std::uint32_t> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<std::uint32_t>((i + k) % n);
  return Permutation(std::move(img));
}

inline std::string signed_label(long long v) { return (v > 0 ? "+" : "") + std::to_string(v); }

}  // namespace detail

/// Z/nZ acting on n points by rotation, generated by {+-k : k in steps}.
/// Labels are "+k"/"-k"; an element equal to its own negative is labelled "k".
inline GeneratedGroup cyclic_group(std::size_t n, std::vector<long long> steps = {1}) {
  detail::require(n >= 1, ErrorKind::InvalidArgument, "cyclic group needs n >= 1");
  const auto nn = static_cast<long long>(n);
  if (n == 1) {
    return {generate_group(std::vector<Permutation>{Permutation::identity(1)}), GeneratorSet{}};
  }
  std::vector<Permutation> perms;
  std::vector<std::pair<std::string, long long>> labelled;
  for (long long k : steps) {
    const long long pos = ((k % nn) + nn) % nn;
    detail::require(pos != 0, ErrorKind::InvalidArgument, "cyclic step is 0 mod n");
    const long long neg = (nn - pos) % nn;
    if (pos == neg) {
      labelled.emplace_back(std::to_string(pos), pos);
    } else {
      labelled.emplace_back(detail::signed_label(k), pos);
      labelled.emplace_back(detail::signed_label(-k), neg);
    }
  }
  for (const auto& [_, v] : labelled) perms.push_back(detail::shift(n, static_cast<std::size_t>(v)));
  FiniteGroup g = generate_group(perms);
  std::vector<std::pair<std::string, Element>> gens;
  for (std::size_t i = 0; i < labelled.size(); ++i) gens.emplace_back(labelled[i].first, *g.find(perms[i]));
  return {g, GeneratorSet(g, std::move(gens))};
}

/// Residue class of a cyclic-group element realised by `cyclic_group`.
inline long long cyclic_residue(const FiniteGroup& g, Element x) { return g.permutation(x)(0); }

inline Element cyclic_element(const FiniteGroup& g, long long residue) {
  const auto n = static_cast<long long>(g.degree());
  return *g.find(detail::shift(g.degree(), static_cast<std::size_t>(((residue % n) + n) % n)));
}

/// D_n of order 2n acting on the n-gon, generated by the reflections
/// s0: i -> -i and s1: i -> 1 - i (its Coxeter generators).
inline GeneratedGroup dihedral_group(std::size_t n) {
  detail::require(n >= 3, ErrorKind::InvalidArgument, "dihedral group needs n >= 3");
  std::vector<std::uint32_t> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = static_cast<std::uint32_t>((n - i) % n);
    b[i] = static_cast<std::uint32_t>((n + 1 - i) % n);
  }
  std::vector<Permutation> perms{Permutation(a), Permutation(b)};
  FiniteGroup g = generate_group(perms);
  return {g, GeneratorSet(g, {{"s0", *g.find(perms[0])}, {"s1", *g.find(perms[1])}})};
}

/// Dic_n of order 4n, <a, x | a^{2n}, x^2 = a^n, x a x^-1 = a^-1>, realised by
/// its right regular action. Generators a, a^-1, x, x^-1.
inline GeneratedGroup dicyclic_group(std::size_t n) {
  detail::require(n >= 2, ErrorKind::InvalidArgument, "dicyclic group needs n >= 2");
  const std::size_t m = 2 * n;
  // Element a^k x^e is point k + m e.
  auto mult = [&](std::size_t k, std::size_t e, std::size_t j, std::size_t f) -> std::uint32_t {
    if (e == 0) return static_cast<std::uint32_t>((k + j) % m + m * f);
    const std::size_t base = (k + m - j) % m;
    if (f == 0) return static_cast<std::uint32_t>(base + m);
    return static_cast<std::uint32_t>((base + n) % m);
  };
  std::vector<std::uint32_t> ra(2 * m), rx(2 * m);
  for (std::size_t e = 0; e < 2; ++e)
    for (std::size_t k = 0; k < m; ++k) {
      ra[k + m * e] = mult(k, e, 1, 0);
      rx[k + m * e] = mult(k, e, 0, 1);
    }
  Permutation pa(ra), px(rx);
  std::vector<Permutation> perms{pa, pa.inverse(), px, px.inverse()};
  FiniteGroup g = generate_group(perms);
  return {g, GeneratorSet(g, {{"a", *g.find(perms[0])},
                              {"a^-1", *g.find(perms[1])},
                              {"x", *g.find(perms[2])},
                              {"x^-1", *g.find(perms[3])}})};
}

/// S_n generated by the adjacent transpositions s1 = (0 1), ..., s_{n-1}.
inline GeneratedGroup symmetric_group(std::size_t n) {
  detail::require(n >= 2, ErrorKind::InvalidArgument, "symmetric group needs n >= 2");
  std::vector<Permutation> perms;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    auto p = Permutation::identity(n).images();
    std::swap(p[i], p[i + 1]);
    perms.emplace_back(std::move(p));
  }
  FiniteGroup g = generate_group(perms);
  std::vector<std::pair<std::string, Element>> gens;
  for (std::size_t i = 0; i < perms.size(); ++i) gens.emplace_back("s" + std::to_string(i + 1), *g.find(perms[i]));
  return {g, GeneratorSet(g, std::move(gens))};
}

/// Catalogue lookup. `steps` applies to the cyclic family only.
inline GeneratedGroup builtin_group(Family family, std::size_t n, std::vector<long long> steps = {1}) {
  switch (family) {
    case Family::Cyclic: return cyclic_group(n, std::move(steps));
    case Family::Dihedral: return dihedral_group(n);
    case Family::Dicyclic: return dicyclic_group(n);
    case Family::Symmetric: return symmetric_group(n);
  }
  throw Error(ErrorKind::UnsupportedFamily, "unknown group family");
}

inline Family parse_family(std::string_view name) {
  if (name == "cyclic") return Family::Cyclic;
  if (name == "dihedral") return Family::Dihedral;
  if (name == "dicyclic") return Family::Dicyclic;
  if (name == "symmetric") return Family::Symmetric;
  throw Error(ErrorKind::UnsupportedFamily, "unsupported group family '" + std::string(name) + "'");
}

/// Group generated by arbitrary permutations; labels default to g0, g1, ...
/// and missing inverses are added as "<label>^-1".
inline GeneratedGroup permutation_group(const std::vector<Permutation>& perms,
                                        std::vector<std::string> labels = {},
                                        std::size_t cap = kDefaultGroupCap) {
  FiniteGroup g = generate_group(perms, cap);
  if (labels.empty())
    for (std::size_t i = 0; i < perms.size(); ++i) labels.push_back("g" + std::to_string(i));
  detail::require(labels.size() == perms.size(), ErrorKind::InvalidArgument, "label count mismatch");
  std::vector<std::pair<std::string, Element>> gens;
  for (std::size_t i = 0; i < perms.size(); ++i) gens.emplace_back(labels[i], *g.find(perms[i]));
  return {g, GeneratorSet::with_inverses(g, std::move(gens))};
}

/// A x B acting on the disjoint union of the two ground sets, generated by
/// (S_A x {o}) u ({o} x S_B). Labels are prefixed "1:" and "2:".
inline GeneratedGroup direct_product(const GeneratedGroup& a, const GeneratedGroup& b,
                                     std::size_t cap = kDefaultGroupCap) {
  const std::size_t da = a.group.degree();
  const std::size_t db = b.group.degree();
  auto embed = [&](const Permutation& p, std::size_t offset) {
    auto img = Permutation::identity(da + db).images();
    for (std::size_t i = 0; i < p.degree(); ++i) img[offset + i] = static_cast<std::uint32_t>(offset + p(i));
    return Permutation(std::move(img));
  };
  std::vector<Permutation> perms;
  std::vector<std::string> labels;
  for (const auto& s : a.generators) {
    perms.push_back(embed(a.group.permutation(s.element), 0));
    labels.push_back("1:" + s.label);
  }
  for (const auto& s : b.generators) {
    perms.push_back(embed(b.group.permutation(s.element), da));
    labels.push_back("2:" + s.label);
  }
  if (perms.empty()) return {generate_group(std::vector<Permutation>{Permutation::identity(da + db)}), {}};
  FiniteGroup g = generate_group(perms, cap);
  std::vector<std::pair<std::string, Element>> gens;
  for (std::size_t i = 0; i < perms.size(); ++i) gens.emplace_back(labels[i], *g.find(perms[i]));
  return {g, GeneratorSet(g, std::move(gens))};
}

/// Splits an element of `direct_product(a, b)` into its two coordinates.
inline std::pair<Element, Element> product_coordinates(const GeneratedGroup& product, const GeneratedGroup& a,
                                                       const GeneratedGroup& b, Element x) {
  const auto& img = product.group.permutation(x).images();
  const std::size_t da = a.group.degree();
  std::vector<std::uint32_t> left(img.begin(), img.begin() + static_cast<std::ptrdiff_t>(da));
  std::vector<std::uint32_t> right;
  for (std::size_t i = da; i < img.size(); ++i) right.push_back(img[i] - static_cast<std::uint32_t>(da));
  return {*a.group.find(Permutation(left)), *b.group.find(Permutation(right))};
}

}  // namespace crw
