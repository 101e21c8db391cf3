#pragma once

// Sparse real tensors of order k, tensor-vector and tensor-matrix products,
// diagonal similarity, Collatz-Wielandt bounds and the structural predicates
// used by the spectral code.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <map>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperpower/error.hpp"
#include "hyperpower/parallel.hpp"

namespace hyperpower {

using DenseVector = std::vector<double>;
using Index = std::vector<std::size_t>;

/// Entries whose magnitude falls below this after arithmetic are dropped.
inline constexpr double kZeroDrop = 1e-14;

/// Anything that maps x to T x for an order-k, dimension-n tensor T.
template <class Op>
concept TensorOperator = requires(const Op& op, std::span<const double> x) {
  { op.order() } -> std::convertible_to<std::size_t>;
  { op.dim() } -> std::convertible_to<std::size_t>;
  { op.apply(x) } -> std::same_as<DenseVector>;
};

/// Row-major dense matrix. Used for characteristic matrices and diagonals.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  std::span<const double> values() const noexcept { return values_; }

  std::vector<double> column_sums() const {
    std::vector<double> s(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) s[c] += (*this)(r, c);
    return s;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Order-k real tensor with first-mode dimension `dim` and dimension
/// `lower_dim` on modes 2..k. Only nonzero entries are stored; entries are
/// kept sorted by index tuple, so all entries of one row are contiguous.
class SparseTensor {
 public:
  using Entries = std::map<Index, double>;

  SparseTensor(std::size_t order, std::size_t dim) : SparseTensor(order, dim, dim) {}
  SparseTensor(std::size_t order, std::size_t dim, std::size_t lower_dim)
      : order_(order), dim_(dim), lower_dim_(lower_dim) {
    if (order < 1) throw DimensionError("tensor order must be >= 1");
    if (dim < 1 || lower_dim < 1) throw DimensionError("tensor dimension must be >= 1");
  }

  std::size_t order() const noexcept { return order_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t lower_dim() const noexcept { return lower_dim_; }
  bool is_square() const noexcept { return dim_ == lower_dim_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  const Entries& entries() const noexcept { return entries_; }

  double at(const Index& idx) const {
    check_index(idx);
    auto it = entries_.find(idx);
    return it == entries_.end() ? 0.0 : it->second;
  }

  void set(Index idx, double value) {
    check_index(idx);
    if (std::abs(value) < kZeroDrop)
      entries_.erase(idx);
    else
      entries_[std::move(idx)] = value;
  }

  void add(const Index& idx, double value) {
    check_index(idx);
    auto [it, inserted] = entries_.try_emplace(idx, 0.0);
    it->second += value;
    if (std::abs(it->second) < kZeroDrop) entries_.erase(it);
  }

  bool is_nonnegative() const {
    return std::ranges::all_of(entries_, [](const auto& e) { return e.second >= 0.0; });
  }

  DenseVector apply(std::span<const double> x) const;

 private:
  void check_index(const Index& idx) const {
    if (idx.size() != order_)
      throw DimensionError("index has " + std::to_string(idx.size()) + " components, tensor order is " +
                           std::to_string(order_));
    if (idx[0] >= dim_) throw DimensionError("index out of range in mode 1");
    for (std::size_t t = 1; t < idx.size(); ++t)
      if (idx[t] >= lower_dim_) throw DimensionError("index out of range in mode " + std::to_string(t + 1));
  }

  std::size_t order_;
  std::size_t dim_;
  std::size_t lower_dim_;
  Entries entries_;
};

/// Largest absolute entrywise difference; shapes must agree.
inline double max_abs_difference(const SparseTensor& a, const SparseTensor& b) {
  if (a.order() != b.order() || a.dim() != b.dim() || a.lower_dim() != b.lower_dim())
    throw DimensionError("tensor shapes differ");
  double worst = 0.0;
  for (const auto& [idx, v] : a.entries()) worst = std::max(worst, std::abs(v - b.at(idx)));
  for (const auto& [idx, v] : b.entries())
    if (!a.entries().contains(idx)) worst = std::max(worst, std::abs(v));
  return worst;
}

inline SparseTensor diagonal_tensor(std::size_t order, std::span<const double> diag) {
  SparseTensor t(order, diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) t.set(Index(order, i), diag[i]);
  return t;
}

inline SparseTensor identity_tensor(std::size_t order, std::size_t dim) {
  return diagonal_tensor(order, DenseVector(dim, 1.0));
}

/// Block-diagonal sum: indices of `b` are shifted by a.dim().
inline SparseTensor direct_sum(const SparseTensor& a, const SparseTensor& b) {
  if (a.order() != b.order() || !a.is_square() || !b.is_square())
    throw DimensionError("direct_sum needs square tensors of equal order");
  SparseTensor out(a.order(), a.dim() + b.dim());
  for (const auto& [idx, v] : a.entries()) out.set(idx, v);
  for (const auto& [idx, v] : b.entries()) {
    Index shifted = idx;
    for (auto& i : shifted) i += a.dim();
    out.set(std::move(shifted), v);
  }
  return out;
}

/// Relabels every index through `perm` (new index = perm[old]).
inline SparseTensor relabel(const SparseTensor& t, std::span<const std::size_t> perm) {
  if (!t.is_square() || perm.size() != t.dim()) throw DimensionError("permutation size mismatch");
  SparseTensor out(t.order(), t.dim());
  for (const auto& [idx, v] : t.entries()) {
    Index mapped(idx.size());
    std::ranges::transform(idx, mapped.begin(), [&](std::size_t i) { return perm[i]; });
    out.set(std::move(mapped), v);
  }
  return out;
}

/// y_i = sum over i2..ik of t_{i i2..ik} x_{i2} ... x_{ik}.
///
/// Rows are split across `threads`; every row is accumulated in index order by
/// one thread, so the result is identical for any thread count.
inline DenseVector tensor_apply(const SparseTensor& t, std::span<const double> x, std::size_t threads = 1) {
  if (!t.is_square()) throw DimensionError("tensor_apply needs a square tensor");
  if (x.size() != t.dim())
    throw DimensionError("vector length " + std::to_string(x.size()) + " != tensor dim " +
                         std::to_string(t.dim()));
  DenseVector y(t.dim(), 0.0);
  const auto& entries = t.entries();
  detail::parallel_chunks(t.dim(), threads, [&](std::size_t row_begin, std::size_t row_end) {
    Index probe(t.order(), 0);
    probe[0] = row_begin;
    for (auto it = entries.lower_bound(probe); it != entries.end() && it->first[0] < row_end; ++it) {
      const auto& idx = it->first;
      double term = it->second;
      for (std::size_t m = 1; m < idx.size(); ++m) term *= x[idx[m]];
      y[idx[0]] += term;
    }
  });
  return y;
}

inline DenseVector SparseTensor::apply(std::span<const double> x) const { return tensor_apply(*this, x); }

/// Elementwise power x_i^p. A negative base with a non-integer exponent is rejected.
inline DenseVector hadamard_power(std::span<const double> x, double p) {
  const bool integral = std::floor(p) == p;
  DenseVector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!integral && x[i] < 0.0) throw DomainError("negative base with fractional exponent");
    y[i] = std::pow(x[i], p);
  }
  return y;
}

namespace detail {

// Accumulates coef * prod_t b(idx[t], alpha_t) over every combination of
// nonzero columns alpha_t in rows idx[1..].
inline void expand_rows(const std::vector<std::vector<std::pair<std::size_t, double>>>& row_nz,
                        const Index& idx, std::size_t mode, Index& out_idx, double coef,
                        SparseTensor& out) {
  if (mode == idx.size()) {
    out.add(out_idx, coef);
    return;
  }
  for (const auto& [col, v] : row_nz[idx[mode]]) {
    out_idx[mode] = col;
    expand_rows(row_nz, idx, mode + 1, out_idx, coef * v, out);
  }
}

}  // namespace detail

/// Tensor times matrix: c_{i a2..am} = sum a_{i i2..im} b_{i2 a2} ... b_{im am}.
inline SparseTensor general_product(const SparseTensor& a, const DenseMatrix& b) {
  if (a.lower_dim() != b.rows())
    throw DimensionError("tensor lower dimension " + std::to_string(a.lower_dim()) +
                         " != matrix rows " + std::to_string(b.rows()));
  std::vector<std::vector<std::pair<std::size_t, double>>> row_nz(b.rows());
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c)
      if (b(r, c) != 0.0) row_nz[r].emplace_back(c, b(r, c));

  SparseTensor out(a.order(), a.dim(), b.cols());
  Index out_idx(a.order());
  for (const auto& [idx, v] : a.entries()) {
    out_idx[0] = idx[0];
    detail::expand_rows(row_nz, idx, 1, out_idx, v, out);
  }
  return out;
}

/// Matrix times tensor: (X B)_{i i2..ik} = sum_j x_{ij} b_{j i2..ik}.
inline SparseTensor general_product(const DenseMatrix& x, const SparseTensor& b) {
  if (x.cols() != b.dim())
    throw DimensionError("matrix cols " + std::to_string(x.cols()) + " != tensor dim " +
                         std::to_string(b.dim()));
  std::vector<std::vector<std::pair<std::size_t, double>>> col_nz(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c)
      if (x(r, c) != 0.0) col_nz[c].emplace_back(r, x(r, c));

  SparseTensor out(b.order(), x.rows(), b.lower_dim());
  for (const auto& [idx, v] : b.entries()) {
    for (const auto& [row, w] : col_nz[idx[0]]) {
      Index target = idx;
      target[0] = row;
      out.add(target, w * v);
    }
  }
  return out;
}

inline DenseMatrix to_matrix(const SparseTensor& t) {
  if (t.order() != 2) throw DimensionError("to_matrix needs an order-2 tensor");
  DenseMatrix m(t.dim(), t.lower_dim());
  for (const auto& [idx, v] : t.entries()) m(idx[0], idx[1]) = v;
  return m;
}

/// Only the two matrix cases are materialized; any other order combination
/// would blow up to (m-1)(k-1)+1 modes and is rejected.
inline SparseTensor general_product(const SparseTensor& a, const SparseTensor& b) {
  if (b.order() == 2) return general_product(a, to_matrix(b));
  if (a.order() == 2) return general_product(to_matrix(a), b);
  throw UnsupportedProduct("general_product supports tensor x matrix and matrix x tensor only (orders " +
                           std::to_string(a.order()) + ", " + std::to_string(b.order()) + ")");
}

/// D^{-(k-1)} T D with D = diag(d).
inline SparseTensor diagonal_similarity(const SparseTensor& t, std::span<const double> d) {
  if (!t.is_square() || d.size() != t.dim()) throw DimensionError("diagonal length != tensor dim");
  if (std::ranges::any_of(d, [](double v) { return v == 0.0; }))
    throw DomainError("diagonal similarity needs nonzero diagonal entries");
  const double lead = -static_cast<double>(t.order() - 1);
  SparseTensor out(t.order(), t.dim());
  for (const auto& [idx, v] : t.entries()) {
    double w = v * std::pow(d[idx[0]], lead);
    for (std::size_t m = 1; m < idx.size(); ++m) w *= d[idx[m]];
    out.set(idx, w);
  }
  return out;
}

struct Bounds {
  double lower;
  double upper;
};

/// min_i and max_i of (T x)_i / x_i^{k-1} for strictly positive x. For a
/// nonnegative T these bracket its largest H-eigenvalue.
template <TensorOperator Op>
Bounds collatz_wielandt_bounds(const Op& op, std::span<const double> x) {
  if (x.size() != op.dim()) throw DimensionError("vector length != operator dim");
  if (std::ranges::any_of(x, [](double v) { return !(v > 0.0); }))
    throw DomainError("Collatz-Wielandt bounds need a strictly positive vector");
  const DenseVector y = op.apply(x);
  const double p = static_cast<double>(op.order() - 1);
  Bounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] / std::pow(x[i], p);
    b.lower = std::min(b.lower, r);
    b.upper = std::max(b.upper, r);
  }
  return b;
}

/// Arc i -> j (i != j) for every nonzero t_{i i2..ik} with j among i2..ik.
inline std::vector<std::vector<std::size_t>> index_digraph(const SparseTensor& t) {
  if (!t.is_square()) throw DimensionError("index digraph needs a square tensor");
  std::vector<std::vector<std::size_t>> adj(t.dim());
  for (const auto& [idx, v] : t.entries())
    for (std::size_t m = 1; m < idx.size(); ++m)
      if (idx[m] != idx[0]) adj[idx[0]].push_back(idx[m]);
  for (auto& row : adj) {
    std::ranges::sort(row);
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return adj;
}

namespace detail {

inline std::vector<bool> reachable_from(const std::vector<std::vector<std::size_t>>& adj, std::size_t start) {
  std::vector<bool> seen(adj.size(), false);
  std::queue<std::size_t> q;
  seen[start] = true;
  q.push(start);
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t v : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        q.push(v);
      }
  }
  return seen;
}

}  // namespace detail

/// Strongly connected components of a digraph (Tarjan), each sorted, listed in
/// order of their smallest member.
inline std::vector<std::vector<std::size_t>> strong_components(const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> order(n, kUnvisited), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::vector<std::size_t>> comps;
  std::size_t counter = 0;

  // Iterative Tarjan: frames hold (vertex, next neighbour position).
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (order[root] != kUnvisited) continue;
    frames.emplace_back(root, 0);
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [u, pos] = frames.back();
      if (pos < adj[u].size()) {
        const std::size_t v = adj[u][pos++];
        if (order[v] == kUnvisited) {
          order[v] = low[v] = counter++;
          stack.push_back(v);
          on_stack[v] = true;
          frames.emplace_back(v, 0);
        } else if (on_stack[v]) {
          low[u] = std::min(low[u], order[v]);
        }
        continue;
      }
      const std::size_t done = u;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      if (low[done] == order[done]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != done);
        std::ranges::sort(comp);
        comps.push_back(std::move(comp));
      }
    }
  }
  std::ranges::sort(comps, {}, [](const auto& c) { return c.front(); });
  return comps;
}

/// True iff the index digraph of t is strongly connected.
inline bool weak_irreducibility(const SparseTensor& t) {
  const auto adj = index_digraph(t);
  if (adj.size() == 1) return true;
  if (!std::ranges::all_of(detail::reachable_from(adj, 0), std::identity{})) return false;
  std::vector<std::vector<std::size_t>> rev(adj.size());
  for (std::size_t u = 0; u < adj.size(); ++u)
    for (std::size_t v : adj[u]) rev[v].push_back(u);
  return std::ranges::all_of(detail::reachable_from(rev, 0), std::identity{});
}

/// True iff t_{i1..ik} = 0 whenever i1 < split and some later index is >= split.
inline bool is_lower_triangular_block(const SparseTensor& t, std::size_t split) {
  if (!t.is_square()) throw DimensionError("triangular block test needs a square tensor");
  if (split < 1 || split > t.dim() - 1)
    throw DimensionError("split must lie in [1, dim-1], got " + std::to_string(split));
  for (const auto& [idx, v] : t.entries()) {
    if (idx[0] >= split) continue;
    for (std::size_t m = 1; m < idx.size(); ++m)
      if (idx[m] >= split) return false;
  }
  return true;
}

/// Principal sub-tensor on `keep` (sorted), relabelled to 0..keep.size()-1.
inline SparseTensor principal_subtensor(const SparseTensor& t, std::span<const std::size_t> keep) {
  if (!t.is_square()) throw DimensionError("principal sub-tensor needs a square tensor");
  std::vector<std::size_t> pos(t.dim(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = i;
  SparseTensor out(t.order(), keep.size());
  for (const auto& [idx, v] : t.entries()) {
    Index mapped(idx.size());
    bool inside = true;
    for (std::size_t m = 0; m < idx.size() && inside; ++m) {
      mapped[m] = pos[idx[m]];
      inside = mapped[m] != std::numeric_limits<std::size_t>::max();
    }
    if (inside) out.set(std::move(mapped), v);
  }
  return out;
}

}  // namespace hyperpower
