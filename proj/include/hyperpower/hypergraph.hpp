#pragma once

// Simple graphs, k-uniform hypergraphs and their implicit adjacency,
// Laplacian and signless Laplacian tensors.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperpower/error.hpp"
#include "hyperpower/gf2.hpp"
#include "hyperpower/parallel.hpp"
#include "hyperpower/tensor.hpp"

namespace hyperpower {

using Edge = std::pair<std::size_t, std::size_t>;

/// Simple undirected graph. Edges are stored as (min, max) in input order.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    std::set<Edge> seen;
    for (auto& [u, v] : edges_) {
      if (u >= n_ || v >= n_) throw DimensionError("graph edge endpoint out of range");
      if (u == v) throw DomainError("graph has a loop at vertex " + std::to_string(u));
      if (u > v) std::swap(u, v);
      if (!seen.insert({u, v}).second)
        throw DomainError("duplicate graph edge " + std::to_string(u) + "-" + std::to_string(v));
    }
    neighbors_.assign(n_, {});
    incident_.assign(n_, {});
    for (std::size_t j = 0; j < edges_.size(); ++j) {
      const auto [u, v] = edges_[j];
      neighbors_[u].push_back(v);
      neighbors_[v].push_back(u);
      incident_[u].push_back(j);
      incident_[v].push_back(j);
    }
  }

  static Graph complete(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v) e.emplace_back(u, v);
    return Graph(n, std::move(e));
  }
  static Graph path(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
    return Graph(n, std::move(e));
  }
  static Graph cycle(std::size_t n) {
    auto g = path(n).edges();
    if (n >= 3) g.emplace_back(n - 1, 0);
    return Graph(n, std::move(g));
  }
  static Graph star(std::size_t leaves) {
    std::vector<Edge> e;
    for (std::size_t v = 1; v <= leaves; ++v) e.emplace_back(0, v);
    return Graph(leaves + 1, std::move(e));
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  /// Neighbours of v, in the order the connecting edges were listed.
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return neighbors_.at(v); }
  /// Edge ids incident to v, parallel to neighbors(v).
  const std::vector<std::size_t>& incident_edges(std::size_t v) const { return incident_.at(v); }
  std::size_t degree(std::size_t v) const { return neighbors_.at(v).size(); }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (const auto& nb : neighbors_) d = std::max(d, nb.size());
    return d;
  }

  bool has_edge(std::size_t u, std::size_t v) const {
    if (u >= n_ || v >= n_) return false;
    return std::ranges::find(neighbors_[u], v) != neighbors_[u].end();
  }

  /// Connected components, each sorted, ordered by smallest vertex.
  std::vector<std::vector<std::size_t>> components() const {
    std::vector<std::size_t> label(n_, n_);
    std::vector<std::vector<std::size_t>> comps;
    for (std::size_t s = 0; s < n_; ++s) {
      if (label[s] != n_) continue;
      std::vector<std::size_t> comp{s}, stack{s};
      label[s] = comps.size();
      while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v : neighbors_[u])
          if (label[v] == n_) {
            label[v] = comps.size();
            comp.push_back(v);
            stack.push_back(v);
          }
      }
      std::ranges::sort(comp);
      comps.push_back(std::move(comp));
    }
    return comps;
  }

  bool is_connected() const { return n_ <= 1 || components().size() == 1; }

  bool is_regular() const {
    return std::ranges::all_of(neighbors_, [&](const auto& nb) { return nb.size() == max_degree(); });
  }

  bool is_bipartite() const {
    std::vector<int> color(n_, -1);
    for (std::size_t s = 0; s < n_; ++s) {
      if (color[s] >= 0) continue;
      color[s] = 0;
      std::vector<std::size_t> stack{s};
      while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v : neighbors_[u]) {
          if (color[v] < 0) {
            color[v] = 1 - color[u];
            stack.push_back(v);
          } else if (color[v] == color[u]) {
            return false;
          }
        }
      }
    }
    return true;
  }

  /// Subgraph induced on `keep` (sorted), relabelled to 0..keep.size()-1,
  /// edges kept in original order.
  Graph induced(std::span<const std::size_t> keep) const {
    std::vector<std::size_t> pos(n_, n_);
    for (std::size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = i;
    std::vector<Edge> e;
    for (const auto& [u, v] : edges_)
      if (pos[u] != n_ && pos[v] != n_) e.emplace_back(pos[u], pos[v]);
    return Graph(keep.size(), std::move(e));
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::vector<std::vector<std::size_t>> incident_;
};

/// k-uniform hypergraph; every edge is a sorted set of k distinct vertices.
class Hypergraph {
 public:
  Hypergraph(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>> edges)
      : n_(n), k_(k), edges_(std::move(edges)) {
    if (k_ < 2) throw DomainError("hypergraph edge size must be >= 2");
    std::set<std::vector<std::size_t>> seen;
    for (auto& e : edges_) {
      if (e.size() != k_)
        throw DomainError("edge has " + std::to_string(e.size()) + " vertices, expected " + std::to_string(k_));
      std::ranges::sort(e);
      if (std::adjacent_find(e.begin(), e.end()) != e.end()) throw DomainError("edge repeats a vertex");
      if (e.back() >= n_) throw DimensionError("edge vertex out of range");
      if (!seen.insert(e).second) throw DomainError("duplicate hyperedge");
    }
    incident_.assign(n_, {});
    for (std::size_t j = 0; j < edges_.size(); ++j)
      for (std::size_t v : edges_[j]) incident_[v].push_back(j);
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t m() const noexcept { return edges_.size(); }
  const std::vector<std::vector<std::size_t>>& edges() const noexcept { return edges_; }
  const std::vector<std::size_t>& incident_edges(std::size_t v) const { return incident_.at(v); }

  DenseVector degrees() const {
    DenseVector d(n_);
    for (std::size_t v = 0; v < n_; ++v) d[v] = static_cast<double>(incident_[v].size());
    return d;
  }

  /// Connected components (vertices sharing an edge), ordered by smallest vertex.
  std::vector<std::vector<std::size_t>> components() const {
    std::vector<std::size_t> parent(n_);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& e : edges_)
      for (std::size_t t = 1; t < e.size(); ++t) {
        const auto a = find(e[0]), b = find(e[t]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    std::vector<std::vector<std::size_t>> by_root(n_);
    for (std::size_t v = 0; v < n_; ++v) by_root[find(v)].push_back(v);
    std::vector<std::vector<std::size_t>> comps;
    for (auto& c : by_root)
      if (!c.empty()) comps.push_back(std::move(c));
    return comps;
  }

  bool is_connected() const { return n_ <= 1 || components().size() == 1; }

  /// Sub-hypergraph induced on a union of components (`keep` sorted).
  Hypergraph induced(std::span<const std::size_t> keep) const {
    std::vector<std::size_t> pos(n_, n_);
    for (std::size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = i;
    std::vector<std::vector<std::size_t>> e;
    for (const auto& edge : edges_) {
      std::vector<std::size_t> mapped;
      for (std::size_t v : edge)
        if (pos[v] != n_) mapped.push_back(pos[v]);
      if (mapped.size() == k_) e.push_back(std::move(mapped));
    }
    return Hypergraph(keep.size(), k_, std::move(e));
  }

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<std::vector<std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> incident_;
};

/// A 2-uniform hypergraph with the same vertex set and edges.
inline Hypergraph as_hypergraph(const Graph& g) {
  std::vector<std::vector<std::size_t>> e;
  for (const auto& [u, v] : g.edges()) e.push_back({u, v});
  return Hypergraph(g.n(), 2, std::move(e));
}

inline DenseVector degrees(const Hypergraph& h) { return h.degrees(); }

/// (A x)_i = sum over edges e containing i of the product of x_j, j in e \ {i}.
inline DenseVector adjacency_apply(const Hypergraph& h, std::span<const double> x, std::size_t threads = 1) {
  if (x.size() != h.n()) throw DimensionError("vector length != hypergraph vertex count");
  DenseVector y(h.n(), 0.0);
  detail::parallel_chunks(h.n(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double acc = 0.0;
      for (std::size_t j : h.incident_edges(i)) {
        double prod = 1.0;
        for (std::size_t v : h.edges()[j])
          if (v != i) prod *= x[v];
        acc += prod;
      }
      y[i] = acc;
    }
  });
  return y;
}

/// (Q x)_i = d_i x_i^{k-1} + (A x)_i.
inline DenseVector signless_apply(const Hypergraph& h, std::span<const double> x, std::size_t threads = 1) {
  DenseVector y = adjacency_apply(h, x, threads);
  const double p = static_cast<double>(h.k() - 1);
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] += static_cast<double>(h.incident_edges(i).size()) * std::pow(x[i], p);
  return y;
}

/// (L x)_i = d_i x_i^{k-1} - (A x)_i.
inline DenseVector laplacian_apply(const Hypergraph& h, std::span<const double> x, std::size_t threads = 1) {
  DenseVector y = adjacency_apply(h, x, threads);
  const double p = static_cast<double>(h.k() - 1);
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = static_cast<double>(h.incident_edges(i).size()) * std::pow(x[i], p) - y[i];
  return y;
}

enum class TensorKind { Adjacency, SignlessLaplacian, Laplacian };

inline std::string to_string(TensorKind kind) {
  switch (kind) {
    case TensorKind::Adjacency: return "A";
    case TensorKind::SignlessLaplacian: return "Q";
    case TensorKind::Laplacian: return "L";
  }
  return "?";
}

/// Implicit A, Q or L of a hypergraph; never materializes entries.
class HypergraphOperator {
 public:
  HypergraphOperator(const Hypergraph& h, TensorKind kind, std::size_t threads = 1)
      : h_(&h), kind_(kind), threads_(threads) {}

  std::size_t order() const noexcept { return h_->k(); }
  std::size_t dim() const noexcept { return h_->n(); }
  TensorKind kind() const noexcept { return kind_; }
  const Hypergraph& hypergraph() const noexcept { return *h_; }

  DenseVector apply(std::span<const double> x) const {
    switch (kind_) {
      case TensorKind::Adjacency: return adjacency_apply(*h_, x, threads_);
      case TensorKind::SignlessLaplacian: return signless_apply(*h_, x, threads_);
      case TensorKind::Laplacian: return laplacian_apply(*h_, x, threads_);
    }
    return {};
  }

 private:
  const Hypergraph* h_;
  TensorKind kind_;
  std::size_t threads_;
};

/// Explicit tensor with (k-1)! orderings of weight 1/(k-1)! per edge, plus the
/// degree diagonal for Q and L. Entry count grows like m k!, so this is meant
/// for cross-checks on small hypergraphs.
inline SparseTensor materialize(const Hypergraph& h, TensorKind kind) {
  const std::size_t k = h.k();
  double fact = 1.0;
  for (std::size_t t = 2; t < k; ++t) fact *= static_cast<double>(t);
  const double w = (kind == TensorKind::Laplacian ? -1.0 : 1.0) / fact;
  SparseTensor t(k, std::max<std::size_t>(h.n(), 1));
  for (const auto& e : h.edges()) {
    Index perm = e;
    do {
      t.add(perm, w);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  if (kind != TensorKind::Adjacency) {
    const auto d = h.degrees();
    for (std::size_t i = 0; i < h.n(); ++i)
      if (d[i] != 0.0) t.add(Index(k, i), d[i]);
  }
  return t;
}

struct Bipartition {
  std::vector<std::size_t> first;   // V1: every edge meets it an odd number of times
  std::vector<std::size_t> second;  // V2 = V \ V1
};

/// Odd-bipartite certificate for even k, found by solving
/// sum_{v in e} x_v = 1 over GF(2) for every edge. Odd k yields nullopt.
inline std::optional<Bipartition> is_odd_bipartite(const Hypergraph& h) {
  if (h.k() % 2 != 0) return std::nullopt;
  Gf2System sys(h.n());
  for (const auto& e : h.edges()) sys.add_equation(e, true);
  const auto x = sys.solve();
  if (!x) return std::nullopt;
  Bipartition cert;
  for (std::size_t v = 0; v < h.n(); ++v) ((*x)[v] ? cert.first : cert.second).push_back(v);
  return cert;
}

/// Every edge meets `v1` in an odd number of vertices.
inline bool verify_odd_bipartite(const Hypergraph& h, std::span<const std::size_t> v1) {
  std::vector<bool> in(h.n(), false);
  for (std::size_t v : v1) in.at(v) = true;
  return std::ranges::all_of(h.edges(), [&](const auto& e) {
    return std::ranges::count_if(e, [&](std::size_t v) { return in[v]; }) % 2 == 1;
  });
}

}  // namespace hyperpower
