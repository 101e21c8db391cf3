#pragma once

// Equitable partitions of tensors: the predicate, quotient tensors,
// characteristic matrices, eigenvector lifting and coarsest refinement.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperpower/error.hpp"
#include "hyperpower/tensor.hpp"

namespace hyperpower {

/// Ordered blocks covering [0, n); block order fixes quotient indices.
class Partition {
 public:
  explicit Partition(std::vector<std::vector<std::size_t>> blocks) : blocks_(std::move(blocks)) {
    for (const auto& b : blocks_) n_ += b.size();
    block_of_.assign(n_, kNone);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      auto& b = blocks_[i];
      if (b.empty()) throw DomainError("partition block " + std::to_string(i) + " is empty");
      std::ranges::sort(b);
      for (std::size_t v : b) {
        if (v >= n_) throw DomainError("partition does not cover [0, n): vertex " + std::to_string(v));
        if (block_of_[v] != kNone) throw DomainError("vertex " + std::to_string(v) + " in two blocks");
        block_of_[v] = i;
      }
    }
  }

  static Partition singletons(std::size_t n) {
    std::vector<std::vector<std::size_t>> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = {i};
    return Partition(std::move(b));
  }

  static Partition one_block(std::size_t n) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return Partition({std::move(all)});
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }
  const std::vector<std::size_t>& block(std::size_t i) const { return blocks_.at(i); }
  std::size_t block_of(std::size_t v) const { return block_of_.at(v); }

  /// Every block of `this` lies inside one block of `coarser`.
  bool refines(const Partition& coarser) const {
    if (coarser.n() != n_) return false;
    return std::ranges::all_of(blocks_, [&](const auto& b) {
      return std::ranges::all_of(b, [&](std::size_t v) { return coarser.block_of(v) == coarser.block_of(b[0]); });
    });
  }

  friend bool operator==(const Partition& a, const Partition& b) { return a.blocks_ == b.blocks_; }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> block_of_;
  std::size_t n_ = 0;
};

/// n x m 0/1 matrix with x_{ij} = 1 iff i is in block j.
inline DenseMatrix characteristic_matrix(const Partition& p) {
  DenseMatrix x(p.n(), p.size());
  for (std::size_t j = 0; j < p.size(); ++j)
    for (std::size_t i : p.block(j)) x(i, j) = 1.0;
  return x;
}

struct EquitableTolerance {
  double absolute = 1e-12;
  double relative = 0.0;

  bool same(double a, double b) const {
    return std::abs(a - b) <= absolute + relative * std::max(std::abs(a), std::abs(b));
  }
};

namespace detail {

// For each (row vertex j, block tuple of the lower indices) the sum of the
// entries of row j whose lower indices fall in those blocks. Only tuples that
// some nonzero entry reaches are present.
using RowBlockSums = std::map<std::pair<std::size_t, Index>, double>;

inline RowBlockSums row_block_sums(const SparseTensor& t, const Partition& p) {
  RowBlockSums sums;
  for (const auto& [idx, v] : t.entries()) {
    Index blocks(idx.size() - 1);
    for (std::size_t m = 1; m < idx.size(); ++m) blocks[m - 1] = p.block_of(idx[m]);
    sums[{idx[0], std::move(blocks)}] += v;
  }
  return sums;
}

inline void check_square(const SparseTensor& t, const Partition& p) {
  if (!t.is_square() || t.dim() != p.n())
    throw DimensionError("partition covers " + std::to_string(p.n()) + " vertices, tensor dim is " +
                         std::to_string(t.dim()));
}

}  // namespace detail

/// True iff, for every block-index tuple (i, i2..ik), the row sums
/// sum_{j2 in V_i2, ...} t_{j j2..jk} agree for all j in V_i.
inline bool is_equitable(const SparseTensor& t, const Partition& p, EquitableTolerance tol = {}) {
  detail::check_square(t, p);
  // Group by (row block, lower block tuple) -> per-vertex sums.
  std::map<std::pair<std::size_t, Index>, std::vector<double>> groups;
  for (const auto& [key, sum] : detail::row_block_sums(t, p))
    groups[{p.block_of(key.first), key.second}].push_back(sum);
  for (const auto& [key, sums] : groups) {
    const std::size_t block_size = p.block(key.first).size();
    // Vertices absent from `sums` contribute an implicit 0.
    const double ref = sums.size() < block_size ? 0.0 : sums.front();
    for (double s : sums)
      if (!tol.same(s, ref)) return false;
  }
  return true;
}

/// b_{i i2..ik} = (1/|V_i|) sum_{j in V_i} sum_{j2 in V_i2, ...} t_{j j2..jk}.
inline SparseTensor quotient_tensor(const SparseTensor& t, const Partition& p) {
  detail::check_square(t, p);
  SparseTensor b(t.order(), p.size());
  // Accumulate in ascending row order (the map is sorted by row vertex).
  std::map<Index, double> acc;
  for (const auto& [key, sum] : detail::row_block_sums(t, p)) {
    Index idx(t.order());
    idx[0] = p.block_of(key.first);
    std::ranges::copy(key.second, idx.begin() + 1);
    acc[idx] += sum;
  }
  for (const auto& [idx, sum] : acc) b.set(idx, sum / static_cast<double>(p.block(idx[0]).size()));
  return b;
}

/// Materializes A X and X B and compares them entrywise.
inline bool verify_intertwine(const SparseTensor& t, const Partition& p, const SparseTensor& b,
                              double tol = 1e-12) {
  detail::check_square(t, p);
  if (b.dim() != p.size() || b.order() != t.order())
    throw DimensionError("quotient shape does not match the partition");
  const DenseMatrix x = characteristic_matrix(p);
  return max_abs_difference(general_product(t, x), general_product(x, b)) <= tol;
}

/// x = X y, i.e. x_i = y_{block(i)}.
inline DenseVector lift_eigenvector(const Partition& p, std::span<const double> y) {
  if (y.size() != p.size())
    throw DimensionError("vector has " + std::to_string(y.size()) + " entries, partition has " +
                         std::to_string(p.size()) + " blocks");
  DenseVector x(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) x[i] = y[p.block_of(i)];
  return x;
}

/// Coarsest equitable partition refining `start`. Blocks are split by the
/// signature of their members; the pieces replace the old block in sorted
/// signature order.
inline Partition coarsest_equitable_refinement(const SparseTensor& t, Partition start, EquitableTolerance tol = {}) {
  detail::check_square(t, start);
  using Signature = std::vector<std::pair<Index, double>>;
  auto less = [&](const Signature& a, const Signature& b) {
    const std::size_t len = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < len; ++i) {
      if (a[i].first != b[i].first) return a[i].first < b[i].first;
      if (!tol.same(a[i].second, b[i].second)) return a[i].second < b[i].second;
    }
    return a.size() < b.size();
  };
  auto equal = [&](const Signature& a, const Signature& b) { return !less(a, b) && !less(b, a); };

  Partition current = std::move(start);
  for (;;) {
    std::vector<Signature> sig(current.n());
    for (const auto& [key, sum] : detail::row_block_sums(t, current))
      if (!tol.same(sum, 0.0)) sig[key.first].emplace_back(key.second, sum);

    std::vector<std::vector<std::size_t>> next;
    for (const auto& block : current.blocks()) {
      std::vector<std::size_t> members = block;
      std::ranges::stable_sort(members, [&](std::size_t a, std::size_t b) { return less(sig[a], sig[b]); });
      std::vector<std::size_t> piece{members[0]};
      for (std::size_t i = 1; i < members.size(); ++i) {
        if (!equal(sig[members[i]], sig[piece.front()])) {
          next.push_back(std::move(piece));
          piece.clear();
        }
        piece.push_back(members[i]);
      }
      next.push_back(std::move(piece));
    }
    if (next.size() == current.size()) return current;
    current = Partition(std::move(next));
  }
}

}  // namespace hyperpower
