#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hyperpower/error.hpp"

namespace hyperpower {

/// Linear system over GF(2) with bit-packed rows.
///
/// Gaussian elimination pivots on the lowest free column of each row in
/// insertion order; free variables are set to 0, so the returned solution is
/// deterministic.
class Gf2System {
 public:
  explicit Gf2System(std::size_t vars) : vars_(vars), words_((vars + 64) / 64) {}

  std::size_t vars() const noexcept { return vars_; }
  std::size_t equations() const noexcept { return rows_.size(); }

  /// sum of x_v over `support` = rhs (mod 2). Repeated variables cancel.
  void add_equation(std::span<const std::size_t> support, bool rhs) {
    std::vector<std::uint64_t> row(words_, 0);
    for (std::size_t v : support) {
      if (v >= vars_) throw DimensionError("GF(2) variable out of range");
      row[v / 64] ^= std::uint64_t{1} << (v % 64);
    }
    if (rhs) row[vars_ / 64] ^= std::uint64_t{1} << (vars_ % 64);
    rows_.push_back(std::move(row));
  }

  std::optional<std::vector<std::uint8_t>> solve() const {
    auto rows = rows_;
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < vars_ && rank < rows.size(); ++col) {
      std::size_t sel = rank;
      while (sel < rows.size() && !bit(rows[sel], col)) ++sel;
      if (sel == rows.size()) continue;
      std::swap(rows[rank], rows[sel]);
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (r != rank && bit(rows[r], col))
          for (std::size_t w = 0; w < words_; ++w) rows[r][w] ^= rows[rank][w];
      pivot_col.push_back(col);
      ++rank;
    }
    // Remaining rows are 0 = rhs.
    for (std::size_t r = rank; r < rows.size(); ++r)
      if (bit(rows[r], vars_)) return std::nullopt;

    std::vector<std::uint8_t> x(vars_, 0);
    for (std::size_t r = 0; r < rank; ++r) x[pivot_col[r]] = bit(rows[r], vars_) ? 1 : 0;
    return x;
  }

 private:
  static bool bit(const std::vector<std::uint64_t>& row, std::size_t i) {
    return (row[i / 64] >> (i % 64)) & 1U;
  }

  std::size_t vars_;
  std::size_t words_;
  std::vector<std::vector<std::uint64_t>> rows_;
};

}  // namespace hyperpower
