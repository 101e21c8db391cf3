#pragma once

#include <stdexcept>
#include <string>

namespace hyperpower {

/// Operand shapes disagree (vector length vs tensor dimension, partition size, ...).
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A numeric precondition was violated (zero diagonal, negative entry, bad exponent).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Generalized power parameters outside 1 <= s <= k/2, k >= 2.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedProduct : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotOddBipartite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Power iteration ran out of iterations; the last Collatz-Wielandt bracket is kept.
struct NotConverged : std::runtime_error {
  NotConverged(const std::string& what, double lo, double hi, long iters)
      : std::runtime_error(what), lower(lo), upper(hi), iterations(iters) {}
  double lower;
  double upper;
  long iterations;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hyperpower
