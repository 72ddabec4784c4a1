#pragma once

// Finite Coxeter systems from a fixed catalogue (A_n, B_n, D_n, I_2(m) and
// direct products of these), with the reflection, wall and Bruhat-order
// machinery used by the monotonicity checks.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crw/error.hpp"
#include "crw/group.hpp"

namespace crw {

/// Symmetric matrix of m(s, s') with m(s, s) = 1; 0 encodes infinity.
class CoxeterMatrix {
 public:
  static constexpr unsigned kInfinity = 0;

  CoxeterMatrix() = default;

  explicit CoxeterMatrix(std::vector<std::vector<unsigned>> m) : m_(std::move(m)) {
    const auto k = m_.size();
    detail::require(k > 0, ErrorKind::InvalidArgument, "empty Coxeter matrix");
    for (std::size_t i = 0; i < k; ++i) {
      detail::require(m_[i].size() == k, ErrorKind::InvalidArgument, "Coxeter matrix is not square");
      detail::require(m_[i][i] == 1, ErrorKind::InvalidArgument, "Coxeter matrix diagonal must be 1");
      for (std::size_t j = 0; j < k; ++j) {
        detail::require(m_[i][j] == m_[j][i], ErrorKind::InvalidArgument, "Coxeter matrix is not symmetric");
        detail::require(i == j || m_[i][j] == kInfinity || m_[i][j] >= 2, ErrorKind::InvalidArgument,
                        "off-diagonal Coxeter entries must be >= 2 or infinity");
      }
    }
  }

  std::size_t rank() const noexcept { return m_.size(); }
  unsigned operator()(std::size_t i, std::size_t j) const { return m_[i][j]; }
  const std::vector<std::vector<unsigned>>& rows() const noexcept { return m_; }

  /// A_n: path with m = 3.
  static CoxeterMatrix type_a(std::size_t n) { return path(n, 3, 3); }
  /// B_n: path with m = 4 on the first edge.
  static CoxeterMatrix type_b(std::size_t n) { return path(n, 4, 3); }
  /// I_2(m).
  static CoxeterMatrix dihedral(unsigned m) { return CoxeterMatrix({{1, m}, {m, 1}}); }
  /// D_n: nodes 0 and 1 both attached to node 2, then a path 2-3-...-(n-1).
  static CoxeterMatrix type_d(std::size_t n) {
    detail::require(n >= 4, ErrorKind::InvalidArgument, "D_n needs n >= 4");
    std::vector<std::vector<unsigned>> m(n, std::vector<unsigned>(n, 2));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    auto link = [&](std::size_t a, std::size_t b) { m[a][b] = m[b][a] = 3; };
    link(0, 2);
    link(1, 2);
    for (std::size_t i = 2; i + 1 < n; ++i) link(i, i + 1);
    return CoxeterMatrix(std::move(m));
  }

  /// Block-diagonal sum (the Coxeter matrix of a direct product).
  static CoxeterMatrix product(const CoxeterMatrix& a, const CoxeterMatrix& b) {
    const auto ka = a.rank(), kb = b.rank();
    std::vector<std::vector<unsigned>> m(ka + kb, std::vector<unsigned>(ka + kb, 2));
    for (std::size_t i = 0; i < ka; ++i)
      for (std::size_t j = 0; j < ka; ++j) m[i][j] = a(i, j);
    for (std::size_t i = 0; i < kb; ++i)
      for (std::size_t j = 0; j < kb; ++j) m[ka + i][ka + j] = b(i, j);
    return CoxeterMatrix(std::move(m));
  }

 private:
  static CoxeterMatrix path(std::size_t n, unsigned first, unsigned rest) {
    detail::require(n >= 1, ErrorKind::InvalidArgument, "rank must be positive");
    std::vector<std::vector<unsigned>> m(n, std::vector<unsigned>(n, 2));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) m[i][i + 1] = m[i + 1][i] = (i == 0 ? first : rest);
    return CoxeterMatrix(std::move(m));
  }

  std::vector<std::vector<unsigned>> m_;
};

/// Irreducible factor of a catalogue realisation.
struct CoxeterFactor {
  char type = 'A';                 // 'A', 'B', 'D' or 'I'
  std::size_t rank = 1;            // n for A_n, B_n, D_n; 2 for I_2(m)
  unsigned m = 0;                  // I_2(m) only
  std::vector<std::size_t> nodes;  // matrix indices, in the factor's canonical order

  std::string name() const {
    if (type == 'I') return "I2(" + std::to_string(m) + ")";
    return std::string(1, type) + std::to_string(rank);
  }
};

struct CoxeterRealization {
  GeneratedGroup system;  // generators labelled s0, s1, ... by matrix index
  CoxeterMatrix matrix;
  std::vector<CoxeterFactor> factors;

  const FiniteGroup& group() const { return system.group; }
  const GeneratorSet& generators() const { return system.generators; }
  CayleyGraph cayley() const { return system.cayley(); }

  std::string name() const {
    std::string out;
    for (const auto& f : factors) out += (out.empty() ? "" : "x") + f.name();
    return out;
  }
};

namespace detail {

inline std::vector<std::vector<std::size_t>> coxeter_components(const CoxeterMatrix& m) {
  const auto k = m.rank();
  std::vector<int> comp(k, -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < k; ++s) {
    if (comp[s] >= 0) continue;
    out.emplace_back();
    std::deque<std::size_t> q{s};
    comp[s] = static_cast<int>(out.size() - 1);
    while (!q.empty()) {
      auto a = q.front();
      q.pop_front();
      out.back().push_back(a);
      for (std::size_t b = 0; b < k; ++b)
        if (b != a && m(a, b) != 2 && comp[b] < 0) {
          comp[b] = comp[s];
          q.push_back(b);
        }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

/// Orders a path-shaped component from one end; empty if not a path.
inline std::vector<std::size_t> path_order(const CoxeterMatrix& m, const std::vector<std::size_t>& nodes,
                                           std::optional<std::size_t> start) {
  auto degree = [&](std::size_t a) {
    std::size_t d = 0;
    for (auto b : nodes)
      if (b != a && m(a, b) != 2) ++d;
    return d;
  };
  if (!start) {
    for (auto a : nodes)
      if (degree(a) <= 1) {
        start = a;
        break;
      }
    if (!start) return {};
  }
  std::vector<std::size_t> order{*start};
  std::vector<bool> used(m.rank(), false);
  used[*start] = true;
  while (order.size() < nodes.size()) {
    std::optional<std::size_t> next;
    for (auto b : nodes)
      if (!used[b] && m(order.back(), b) != 2) {
        if (next) return {};
        next = b;
      }
    if (!next) return {};
    used[*next] = true;
    order.push_back(*next);
  }
  for (auto a : nodes)
    if (degree(a) > 2) return {};
  return order;
}

inline CoxeterFactor classify_component(const CoxeterMatrix& m, const std::vector<std::size_t>& nodes) {
  const auto unsupported = [&](const std::string& why) {
    return Error(ErrorKind::UnsupportedType, "Coxeter component is not in the catalogue: " + why);
  };
  for (auto a : nodes)
    for (auto b : nodes)
      if (a != b && m(a, b) == CoxeterMatrix::kInfinity) throw unsupported("infinite order entry");

  if (nodes.size() == 1) return {'A', 1, 0, nodes};
  if (nodes.size() == 2) {
    const unsigned mm = m(nodes[0], nodes[1]);
    if (mm == 3) return {'A', 2, 0, nodes};
    return {'I', 2, mm, nodes};
  }

  std::size_t count4 = 0;
  for (auto a : nodes)
    for (auto b : nodes)
      if (a < b && m(a, b) != 2) {
        if (m(a, b) == 4)
          ++count4;
        else if (m(a, b) != 3)
          throw unsupported("entry " + std::to_string(m(a, b)) + " in a rank >= 3 component");
      }

  auto order = path_order(m, nodes, std::nullopt);
  if (!order.empty()) {
    if (count4 == 0) return {'A', nodes.size(), 0, order};
    if (count4 == 1) {
      if (m(order[0], order[1]) == 4) return {'B', nodes.size(), 0, order};
      std::reverse(order.begin(), order.end());
      if (m(order[0], order[1]) == 4) return {'B', nodes.size(), 0, order};
    }
    throw unsupported("path with interior or repeated 4 (F4 or non-crystallographic)");
  }
  if (count4 != 0) throw unsupported("branched diagram with a 4");

  // D_n: one node of degree 3 with two leaf neighbours and a path beyond.
  auto nbrs = [&](std::size_t a) {
    std::vector<std::size_t> out;
    for (auto b : nodes)
      if (b != a && m(a, b) != 2) out.push_back(b);
    return out;
  };
  std::vector<std::size_t> branch;
  for (auto a : nodes) {
    const auto d = nbrs(a).size();
    if (d > 3) throw unsupported("node of degree > 3");
    if (d == 3) branch.push_back(a);
  }
  if (branch.size() != 1) throw unsupported("not a D-type diagram");
  const auto centre = branch.front();
  std::vector<std::size_t> leaves, others;
  for (auto b : nbrs(centre)) (nbrs(b).size() == 1 ? leaves : others).push_back(b);
  if (leaves.size() < 2) throw unsupported("E-type or other branched diagram");
  if (leaves.size() == 3) {  // D_4
    others.push_back(leaves.back());
    leaves.pop_back();
  }
  // Tail: centre, others[0], ... must be a simple path.
  std::vector<std::size_t> order_d{leaves[0], leaves[1], centre};
  std::vector<bool> used(m.rank(), false);
  for (auto a : order_d) used[a] = true;
  std::size_t cur = others.front();
  while (true) {
    used[cur] = true;
    order_d.push_back(cur);
    std::optional<std::size_t> next;
    for (auto b : nbrs(cur))
      if (!used[b]) {
        if (next) throw unsupported("not a D-type diagram");
        next = b;
      }
    if (!next) break;
    cur = *next;
  }
  if (order_d.size() != nodes.size()) throw unsupported("not a D-type diagram");
  return {'D', nodes.size(), 0, order_d};
}

/// Generating involutions of a factor as permutations on `degree` points.
inline std::vector<Permutation> factor_permutations(const CoxeterFactor& f) {
  auto transposition_product = [](std::size_t degree, std::vector<std::pair<std::size_t, std::size_t>> swaps) {
    auto img = Permutation::identity(degree).images();
    for (auto [a, b] : swaps) std::swap(img[a], img[b]);
    return Permutation(std::move(img));
  };
  std::vector<Permutation> out;
  const auto n = f.rank;
  switch (f.type) {
    case 'A':  // S_{n+1}, adjacent transpositions
      for (std::size_t i = 0; i < n; ++i) out.push_back(transposition_product(n + 1, {{i, i + 1}}));
      break;
    case 'B': {  // signed permutations: point i is +i, point n + i is -i
      out.push_back(transposition_product(2 * n, {{0, n}}));
      for (std::size_t i = 0; i + 1 < n; ++i)
        out.push_back(transposition_product(2 * n, {{i, i + 1}, {n + i, n + i + 1}}));
      break;
    }
    case 'D': {  // even signed permutations; the two leaves are (1 2) and (1 -2)
      out.push_back(transposition_product(2 * n, {{0, 1}, {n, n + 1}}));
      out.push_back(transposition_product(2 * n, {{0, n + 1}, {1, n}}));
      for (std::size_t i = 1; i + 1 < n; ++i)
        out.push_back(transposition_product(2 * n, {{i, i + 1}, {n + i, n + i + 1}}));
      break;
    }
    case 'I': {  // reflections of the m-gon
      const std::size_t m = f.m;
      std::vector<std::uint32_t> a(m), b(m);
      for (std::size_t i = 0; i < m; ++i) {
        a[i] = static_cast<std::uint32_t>((m - i) % m);
        b[i] = static_cast<std::uint32_t>((m + 1 - i) % m);
      }
      out.emplace_back(std::move(a));
      out.emplace_back(std::move(b));
      break;
    }
    default: throw Error(ErrorKind::UnsupportedType, "unknown factor type");
  }
  return out;
}

inline std::size_t element_order(const FiniteGroup& g, Element x) {
  std::size_t k = 1;
  Element y = x;
  while (y != FiniteGroup::identity()) {
    y = g.multiply(y, x);
    ++k;
  }
  return k;
}

}  // namespace detail

/// Concrete realisation of a catalogue Coxeter system; the defining
/// relations are checked on the result.
inline CoxeterRealization coxeter_group(const CoxeterMatrix& matrix, std::size_t cap = kDefaultGroupCap) {
  const auto k = matrix.rank();
  std::vector<CoxeterFactor> factors;
  for (const auto& comp : detail::coxeter_components(matrix))
    factors.push_back(detail::classify_component(matrix, comp));

  std::size_t degree = 0;
  std::vector<std::vector<Permutation>> local;
  for (const auto& f : factors) {
    local.push_back(detail::factor_permutations(f));
    degree += local.back().front().degree();
  }
  std::vector<Permutation> perms(k);
  std::size_t offset = 0;
  for (std::size_t fi = 0; fi < factors.size(); ++fi) {
    const auto d = local[fi].front().degree();
    for (std::size_t j = 0; j < factors[fi].nodes.size(); ++j) {
      auto img = Permutation::identity(degree).images();
      for (std::size_t i = 0; i < d; ++i) img[offset + i] = static_cast<std::uint32_t>(offset + local[fi][j](i));
      perms[factors[fi].nodes[j]] = Permutation(std::move(img));
    }
    offset += d;
  }

  FiniteGroup g = generate_group(perms, cap);
  std::vector<std::pair<std::string, Element>> gens;
  for (std::size_t i = 0; i < k; ++i) gens.emplace_back("s" + std::to_string(i), *g.find(perms[i]));
  GeneratorSet set(g, std::move(gens));

  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const Element prod = g.multiply(set[i].element, set[j].element);
      const auto ord = detail::element_order(g, prod);
      detail::require(ord == matrix(i, j), ErrorKind::UnsupportedType,
                      "realisation violates m(s" + std::to_string(i) + ", s" + std::to_string(j) + ")");
    }
  return {{g, std::move(set)}, matrix, std::move(factors)};
}

/// All conjugates w s w^-1 of generators, sorted.
inline std::vector<Element> reflections(const FiniteGroup& g, const GeneratorSet& gens) {
  std::set<Element> out;
  for (Element w = 0; w < g.order(); ++w)
    for (const auto& s : gens) out.insert(g.multiply(g.multiply(w, s.element), g.inverse(w)));
  return {out.begin(), out.end()};
}

inline std::vector<Element> reflections(const CoxeterRealization& real) {
  return reflections(real.group(), real.generators());
}

struct WallEdge {
  Element x = 0;  // endpoint on the identity side
  std::size_t generator = 0;
};

/// Edges fixed (with endpoints swapped) by left multiplication by a
/// reflection, and the two sides of the graph they separate.
struct Wall {
  Element reflection = 0;
  std::vector<WallEdge> edges;
  std::vector<Element> vertices;  // endpoints of the wall edges, sorted
  std::vector<signed char> side;  // +1 on the identity side, -1 otherwise

  bool on_identity_side(Element x) const { return side[x] > 0; }
  std::vector<Element> minus_side() const {
    std::vector<Element> out;
    for (Element x = 0; x < side.size(); ++x)
      if (side[x] < 0) out.push_back(x);
    return out;
  }
};

/// Wall of the reflection `gamma`: edges (x, xb) with x b x^-1 = gamma.
inline Wall wall_of_reflection(const CayleyGraph& cg, Element gamma) {
  const auto& g = cg.group();
  const auto& gens = cg.generators();
  const auto n = cg.order();
  Wall wall;
  wall.reflection = gamma;
  std::vector<char> crossing(n * gens.size(), 0);
  for (Element x = 0; x < n; ++x)
    for (std::size_t b = 0; b < gens.size(); ++b)
      if (g.multiply(g.multiply(x, gens[b].element), g.inverse(x)) == gamma) crossing[x * gens.size() + b] = 1;

  wall.side.assign(n, 0);
  wall.side[0] = 1;
  std::deque<Element> q{0};
  while (!q.empty()) {
    const Element x = q.front();
    q.pop_front();
    for (std::size_t b = 0; b < gens.size(); ++b) {
      const Element y = cg.neighbor(x, b);
      if (crossing[x * gens.size() + b] || wall.side[y] != 0) continue;
      wall.side[y] = 1;
      q.push_back(y);
    }
  }
  // The complement must form the second component.
  std::optional<Element> seed;
  for (Element x = 0; x < n; ++x)
    if (wall.side[x] == 0) {
      seed = x;
      break;
    }
  detail::require(seed.has_value(), ErrorKind::InvalidArgument, "wall does not separate the Cayley graph");
  wall.side[*seed] = -1;
  q.push_back(*seed);
  std::size_t minus = 1;
  while (!q.empty()) {
    const Element x = q.front();
    q.pop_front();
    for (std::size_t b = 0; b < gens.size(); ++b) {
      const Element y = cg.neighbor(x, b);
      if (crossing[x * gens.size() + b] || wall.side[y] != 0) continue;
      wall.side[y] = -1;
      ++minus;
      q.push_back(y);
    }
  }
  detail::require(std::none_of(wall.side.begin(), wall.side.end(), [](auto s) { return s == 0; }),
                  ErrorKind::InvalidArgument, "removing the wall leaves more than two components");
  (void)minus;

  std::set<Element> verts;
  for (Element x = 0; x < n; ++x)
    for (std::size_t b = 0; b < gens.size(); ++b)
      if (crossing[x * gens.size() + b] && wall.side[x] > 0) {
        wall.edges.push_back({x, b});
        verts.insert(x);
        verts.insert(cg.neighbor(x, b));
      }
  wall.vertices.assign(verts.begin(), verts.end());
  return wall;
}

/// Wall through the edge (w, w s).
inline Wall wall_of_edge(const CayleyGraph& cg, Element w, std::size_t s) {
  const auto& g = cg.group();
  const Element gamma = g.multiply(g.multiply(w, cg.generators()[s].element), g.inverse(w));
  return wall_of_reflection(cg, gamma);
}

inline std::vector<Wall> all_walls(const CayleyGraph& cg) {
  std::vector<Wall> out;
  for (Element r : reflections(cg.group(), cg.generators())) out.push_back(wall_of_reflection(cg, r));
  return out;
}

/// Bruhat order: reflexive-transitive closure of v < L v for reflections L
/// with |v| < |L v|. Dense reachability up to kDenseLimit elements, per-query
/// search beyond.
class BruhatOrder {
 public:
  static constexpr std::size_t kDenseLimit = 200;

  BruhatOrder() = default;

  explicit BruhatOrder(const CayleyGraph& cg) : cg_(cg), refl_(reflections(cg.group(), cg.generators())) {
    const auto n = cg_.order();
    if (n > kDenseLimit) return;
    words_ = (n + 63) / 64;
    above_.assign(n * words_, 0);
    std::vector<Element> by_length(n);
    std::iota(by_length.begin(), by_length.end(), Element{0});
    std::sort(by_length.begin(), by_length.end(),
              [&](Element a, Element b) { return cg_.distance(a) > cg_.distance(b); });
    for (Element v : by_length) {
      set_bit(v, v);
      for (Element u : covers_up(v))
        for (std::size_t w = 0; w < words_; ++w) above_[v * words_ + w] |= above_[u * words_ + w];
    }
  }

  std::size_t size() const { return cg_.order(); }
  std::uint32_t length(Element x) const { return cg_.distance(x); }
  bool dense() const noexcept { return !above_.empty(); }

  /// x <= y.
  bool leq(Element x, Element y) const {
    if (dense()) return (above_[x * words_ + y / 64] >> (y % 64)) & 1u;
    if (x == y) return true;
    if (cg_.distance(x) >= cg_.distance(y)) return false;
    std::vector<char> seen(cg_.order(), 0);
    std::vector<Element> stack{x};
    seen[x] = 1;
    while (!stack.empty()) {
      const Element v = stack.back();
      stack.pop_back();
      for (Element u : covers_up(v)) {
        if (u == y) return true;
        if (!seen[u] && cg_.distance(u) < cg_.distance(y)) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
    return false;
  }

  bool less(Element x, Element y) const { return x != y && leq(x, y); }

  /// All pairs x < y.
  std::vector<std::pair<Element, Element>> strict_pairs() const {
    std::vector<std::pair<Element, Element>> out;
    for (Element x = 0; x < size(); ++x)
      for (Element y = 0; y < size(); ++y)
        if (x != y && leq(x, y)) out.emplace_back(x, y);
    return out;
  }

 private:
  std::vector<Element> covers_up(Element v) const {
    std::vector<Element> out;
    for (Element r : refl_) {
      const Element u = cg_.group().multiply(r, v);
      if (cg_.distance(u) > cg_.distance(v)) out.push_back(u);
    }
    return out;
  }

  void set_bit(Element row, Element col) { above_[row * words_ + col / 64] |= std::uint64_t{1} << (col % 64); }

  CayleyGraph cg_;
  std::vector<Element> refl_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> above_;
};

inline BruhatOrder bruhat_order(const CoxeterRealization& real) { return BruhatOrder(real.cayley()); }

struct WallCheck {
  Element reflection = 0;
  std::size_t edge_count = 0;
  bool separates = true;  // removing the wall leaves two components
  bool single_crossing = true;
  bool orbit_characterization = true;
  bool reflection_swaps_sides = true;
};

struct WallAxiomReport {
  std::string name;
  std::size_t order = 0;
  std::size_t reflection_count = 0;
  bool bipartite = true;
  std::vector<WallCheck> walls;

  bool passed() const {
    return bipartite && std::all_of(walls.begin(), walls.end(), [](const WallCheck& w) {
             return w.separates && w.single_crossing && w.orbit_characterization && w.reflection_swaps_sides;
           });
  }
};

inline constexpr std::size_t kWallAxiomLimit = 200;

/// Exhaustive check of the wall lemmas on a finite Cayley graph.
///
/// Single crossing: a geodesic through wall edges a1->b1 and later a2->b2
/// contains a geodesic from a1 to b2 through both, which exists iff
/// d(a1, b2) = d(b1, a2) + 2. Checking that over ordered pairs of oriented
/// wall edges covers every geodesic between every pair of vertices.
inline WallAxiomReport verify_wall_axioms(const CayleyGraph& cg, std::string name = {}) {
  const auto n = cg.order();
  detail::require(n <= kWallAxiomLimit, ErrorKind::TooLarge,
                  "wall axioms are checked exhaustively only up to order " + std::to_string(kWallAxiomLimit));
  const auto& g = cg.group();
  const auto& gens = cg.generators();
  WallAxiomReport report;
  report.name = std::move(name);
  report.order = n;

  for (Element x = 0; x < n; ++x)
    for (std::size_t s = 0; s < gens.size(); ++s) {
      const auto dx = cg.distance(x), dy = cg.distance(cg.neighbor(x, s));
      if (dx + 1 != dy && dy + 1 != dx) report.bipartite = false;
    }

  const auto refl = reflections(g, gens);
  report.reflection_count = refl.size();
  for (Element gamma : refl) {
    WallCheck check;
    check.reflection = gamma;
    Wall wall;
    try {
      wall = wall_of_reflection(cg, gamma);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvalidArgument) throw;
      check.separates = false;
      report.walls.push_back(check);
      continue;
    }
    check.edge_count = wall.edges.size();

    std::vector<std::pair<Element, Element>> oriented;
    for (const auto& e : wall.edges) {
      const Element y = cg.neighbor(e.x, e.generator);
      oriented.emplace_back(e.x, y);
      oriented.emplace_back(y, e.x);
    }
    for (std::size_t i = 0; i < oriented.size() && check.single_crossing; ++i)
      for (std::size_t j = 0; j < oriented.size(); ++j) {
        const auto [a1, b1] = oriented[i];
        const auto [a2, b2] = oriented[j];
        if ((a1 == a2 && b1 == b2) || (a1 == b2 && b1 == a2)) continue;
        if (cg.distance(a1, b2) == cg.distance(b1, a2) + 2) {
          check.single_crossing = false;
          break;
        }
      }

    for (Element x = 0; x < n; ++x) {
      const Element y = g.multiply(gamma, x);
      if (g.multiply(gamma, y) != x || wall.side[x] == wall.side[y]) check.reflection_swaps_sides = false;
    }

    // Stabiliser of V(M) under left multiplication.
    std::set<Element> verts(wall.vertices.begin(), wall.vertices.end());
    std::vector<Element> stab;
    for (Element h = 0; h < n; ++h) {
      bool keeps = true;
      for (Element v : wall.vertices)
        if (!verts.contains(g.multiply(h, v))) {
          keeps = false;
          break;
        }
      if (keeps) stab.push_back(h);
    }
    for (std::size_t s = 0; s < gens.size(); ++s) {
      std::set<Element> labelled;
      for (const auto& e : wall.edges)
        if (e.generator == s) {
          labelled.insert(e.x);
          labelled.insert(cg.neighbor(e.x, s));
        }
      if (labelled.empty()) continue;
      const Element w = *labelled.begin();
      std::set<Element> orbit;
      for (Element h : stab) orbit.insert(g.multiply(h, w));
      if (orbit != labelled) check.orbit_characterization = false;
    }
    report.walls.push_back(check);
  }
  return report;
}

inline WallAxiomReport verify_wall_axioms(const CoxeterRealization& real) {
  return verify_wall_axioms(real.cayley(), real.name());
}

}  // namespace crw
