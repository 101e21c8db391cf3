#pragma once

// Generalized power hypergraphs G^{k,s}: construction, the natural equitable
// partition, the closed-form quotient of the signless Laplacian, the
// d-regular spectral radius and the regular supergraph embedding.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hyperpower/error.hpp"
#include "hyperpower/hypergraph.hpp"
#include "hyperpower/partition.hpp"
#include "hyperpower/tensor.hpp"

namespace hyperpower {

inline void check_power_params(std::size_t k, std::size_t s) {
  if (k < 2) throw ParameterError("k must be >= 2, got " + std::to_string(k));
  if (s < 1 || 2 * s > k)
    throw ParameterError("s must satisfy 1 <= s <= k/2, got k=" + std::to_string(k) + " s=" + std::to_string(s));
}

/// Vertex labeling of G^{k,s}: V_v = {v s, ..., v s + s - 1}, then the core
/// block of the j-th graph edge, {n s + j (k-2s), ...}, of size k - 2s.
struct GenPowerLabeling {
  std::size_t k = 0;
  std::size_t s = 0;
  std::vector<std::vector<std::size_t>> vertex_blocks;
  std::vector<std::vector<std::size_t>> edge_blocks;  // empty blocks when s = k/2

  std::size_t core_size() const noexcept { return k - 2 * s; }
  std::size_t vertex_count() const noexcept {
    return vertex_blocks.size() * s + edge_blocks.size() * core_size();
  }
};

struct GeneralizedPower {
  Hypergraph hypergraph;
  GenPowerLabeling labeling;
};

inline GeneralizedPower build_generalized_power(const Graph& g, std::size_t k, std::size_t s) {
  check_power_params(k, s);
  GenPowerLabeling lab{k, s, {}, {}};
  const std::size_t core = k - 2 * s;
  for (std::size_t v = 0; v < g.n(); ++v) {
    std::vector<std::size_t> block(s);
    for (std::size_t t = 0; t < s; ++t) block[t] = v * s + t;
    lab.vertex_blocks.push_back(std::move(block));
  }
  const std::size_t base = g.n() * s;
  for (std::size_t j = 0; j < g.m(); ++j) {
    std::vector<std::size_t> block(core);
    for (std::size_t t = 0; t < core; ++t) block[t] = base + j * core + t;
    lab.edge_blocks.push_back(std::move(block));
  }
  std::vector<std::vector<std::size_t>> edges;
  for (std::size_t j = 0; j < g.m(); ++j) {
    const auto [u, v] = g.edges()[j];
    std::vector<std::size_t> e = lab.vertex_blocks[u];
    e.insert(e.end(), lab.vertex_blocks[v].begin(), lab.vertex_blocks[v].end());
    e.insert(e.end(), lab.edge_blocks[j].begin(), lab.edge_blocks[j].end());
    edges.push_back(std::move(e));
  }
  Hypergraph h(lab.vertex_count(), k, std::move(edges));
  return {std::move(h), std::move(lab)};
}

/// Vertex blocks in graph-vertex order, then (for s < k/2) edge blocks in
/// graph-edge order. Quotient indices follow the same order.
inline Partition natural_partition(const GenPowerLabeling& lab) {
  std::vector<std::vector<std::size_t>> blocks = lab.vertex_blocks;
  if (lab.core_size() > 0) blocks.insert(blocks.end(), lab.edge_blocks.begin(), lab.edge_blocks.end());
  return Partition(std::move(blocks));
}

inline std::size_t quotient_dim(const Graph& g, std::size_t k, std::size_t s) {
  check_power_params(k, s);
  return 2 * s < k ? g.n() + g.m() : g.n();
}

namespace detail {

inline double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t t = 2; t <= n; ++t) f *= static_cast<double>(t);
  return f;
}

// Adds `value` at (row, p) for every distinct arrangement p of `lower`.
inline void add_arrangements(SparseTensor& t, std::size_t row, Index lower, double value) {
  std::ranges::sort(lower);
  Index idx(lower.size() + 1);
  idx[0] = row;
  do {
    std::ranges::copy(lower, idx.begin() + 1);
    t.add(idx, value);
  } while (std::next_permutation(lower.begin(), lower.end()));
}

inline Index repeated(std::initializer_list<std::pair<std::size_t, std::size_t>> parts) {
  Index out;
  for (const auto& [value, count] : parts) out.insert(out.end(), count, value);
  return out;
}

}  // namespace detail

/// Quotient B^{k,s} of Q(G^{k,s}) over the natural partition, built entry by
/// entry: 1 on edge-block diagonals, d_v on vertex-block diagonals,
/// (s-1)! s! (k-2s)! / (k-1)! on vertex rows of an incident edge pattern and
/// s! s! (k-2s-1)! / (k-1)! on edge rows.
inline SparseTensor quotient_closed_form(const Graph& g, std::size_t k, std::size_t s) {
  const std::size_t dim = quotient_dim(g, k, s);
  if (dim == 0) throw DimensionError("graph has no vertices");
  const bool cored = 2 * s < k;
  const std::size_t core = k - 2 * s;
  const double vertex_value = detail::factorial(s - 1) * detail::factorial(s) * detail::factorial(core) /
                              detail::factorial(k - 1);
  SparseTensor b(k, dim);
  for (std::size_t v = 0; v < g.n(); ++v)
    if (g.degree(v) > 0) b.set(Index(k, v), static_cast<double>(g.degree(v)));

  for (std::size_t j = 0; j < g.m(); ++j) {
    const auto [u, v] = g.edges()[j];
    const std::size_t e = g.n() + j;
    for (const auto& [row, other] : {std::pair{u, v}, std::pair{v, u}}) {
      Index lower = cored ? detail::repeated({{row, s - 1}, {other, s}, {e, core}})
                          : detail::repeated({{row, s - 1}, {other, s}});
      detail::add_arrangements(b, row, std::move(lower), vertex_value);
    }
    if (cored) {
      const double edge_value = detail::factorial(s) * detail::factorial(s) * detail::factorial(core - 1) /
                                detail::factorial(k - 1);
      b.set(Index(k, e), 1.0);
      detail::add_arrangements(b, e, detail::repeated({{e, core - 1}, {u, s}, {v, s}}), edge_value);
    }
  }
  return b;
}

/// Applies B^{k,s} without materializing it:
///   edge e = uv:  x_e^{k-1} + x_e^{k-2s-1} x_u^s x_v^s
///   vertex v:     d_v x_v^{k-1} + sum_{u ~ v} x_{uv}^{k-2s} x_u^s x_v^{s-1}
/// For s = k/2 there are no edge rows and the x_{uv} factor drops out.
class QuotientOperator {
 public:
  QuotientOperator(Graph g, std::size_t k, std::size_t s) : g_(std::move(g)), k_(k), s_(s) {
    check_power_params(k, s);
  }

  std::size_t order() const noexcept { return k_; }
  std::size_t dim() const noexcept { return 2 * s_ < k_ ? g_.n() + g_.m() : g_.n(); }
  std::size_t s() const noexcept { return s_; }
  const Graph& graph() const noexcept { return g_; }

  DenseVector apply(std::span<const double> x) const {
    if (x.size() != dim())
      throw DimensionError("vector length " + std::to_string(x.size()) + " != quotient dim " +
                           std::to_string(dim()));
    const bool cored = 2 * s_ < k_;
    const double kk = static_cast<double>(k_);
    const double ss = static_cast<double>(s_);
    const double core = kk - 2.0 * ss;
    DenseVector y(x.size(), 0.0);
    for (std::size_t v = 0; v < g_.n(); ++v) {
      double acc = static_cast<double>(g_.degree(v)) * std::pow(x[v], kk - 1.0);
      const auto& nb = g_.neighbors(v);
      const auto& inc = g_.incident_edges(v);
      for (std::size_t t = 0; t < nb.size(); ++t) {
        double term = std::pow(x[nb[t]], ss) * std::pow(x[v], ss - 1.0);
        if (cored) term *= std::pow(x[g_.n() + inc[t]], core);
        acc += term;
      }
      y[v] = acc;
    }
    if (cored) {
      for (std::size_t j = 0; j < g_.m(); ++j) {
        const auto [u, v] = g_.edges()[j];
        const double xe = x[g_.n() + j];
        y[g_.n() + j] = std::pow(xe, kk - 1.0) + std::pow(xe, core - 1.0) * std::pow(x[u], ss) * std::pow(x[v], ss);
      }
    }
    return y;
  }

 private:
  Graph g_;
  std::size_t k_;
  std::size_t s_;
};

inline DenseVector quotient_apply(const Graph& g, std::size_t k, std::size_t s, std::span<const double> x) {
  return QuotientOperator(g, k, s).apply(x);
}

struct RegularRoot {
  double root;
  double lower;  // final bisection bracket
  double upper;
};

/// Largest root of (x - d)(x - 1)^{(k-2s)/(2s)} - d, by bisection on
/// [max(d, 1), 2d + 1] down to width 1e-12. The function is strictly
/// increasing there and changes sign exactly once.
inline RegularRoot regular_root(std::size_t d, std::size_t k, std::size_t s) {
  if (k < 3 || s < 1 || 2 * s + 1 > k)
    throw ParameterError("need k >= 3 and 1 <= s <= floor((k-1)/2), got k=" + std::to_string(k) +
                         " s=" + std::to_string(s));
  if (d < 1) throw ParameterError("degree must be >= 1");
  const double dd = static_cast<double>(d);
  const double expo = static_cast<double>(k - 2 * s) / static_cast<double>(2 * s);
  // k = 4s: (x - d)(x - 1) = d factors as x (x - d - 1).
  if (4 * s == k) return {dd + 1.0, dd + 1.0, dd + 1.0};
  auto f = [&](double x) { return (x - dd) * std::pow(x - 1.0, expo) - dd; };
  double lo = std::max(dd, 1.0);
  double hi = 2.0 * dd + 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return {mid, mid, mid};
    (fm < 0.0 ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), lo, hi};
}

inline double regular_radius(std::size_t d, std::size_t k, std::size_t s) { return regular_root(d, k, s).root; }

/// Positive eigenvector of B^{k,s} for a d-regular graph: 1 on vertex rows,
/// (lambda - 1)^{-1/(2s)} on edge rows.
inline DenseVector regular_perron_vector(const Graph& g, std::size_t k, std::size_t s, double lambda) {
  check_power_params(k, s);
  if (!(lambda > 1.0)) throw DomainError("regular Perron vector needs lambda > 1");
  if (!g.is_regular() || g.m() == 0) throw DomainError("graph is not d-regular with d >= 1");
  DenseVector y(quotient_dim(g, k, s), 1.0);
  const double edge_value = std::pow(lambda - 1.0, -1.0 / (2.0 * static_cast<double>(s)));
  for (std::size_t i = g.n(); i < y.size(); ++i) y[i] = edge_value;
  return y;
}

/// A Delta-regular simple graph whose first n vertices induce g. Each round
/// doubles the graph and matches every deficient vertex to its copy.
inline Graph embed_in_regular(const Graph& g) {
  const std::size_t delta = g.max_degree();
  Graph current = g;
  while (delta > 0 && !current.is_regular()) {
    const std::size_t n = current.n();
    std::vector<Edge> edges = current.edges();
    for (const auto& [u, v] : current.edges()) edges.emplace_back(u + n, v + n);
    for (std::size_t v = 0; v < n; ++v)
      if (current.degree(v) < delta) edges.emplace_back(v, v + n);
    current = Graph(2 * n, std::move(edges));
  }
  return current;
}

}  // namespace hyperpower
