#pragma once

// Largest H-eigenvalue of nonnegative tensors by shifted power iteration with
// a Collatz-Wielandt stopping rule, plus the hypergraph / quotient wrappers,
// the odd-bipartite Laplacian route and the monotonicity harness.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hyperpower/error.hpp"
#include "hyperpower/hypergraph.hpp"
#include "hyperpower/power.hpp"
#include "hyperpower/tensor.hpp"

namespace hyperpower {

struct SolverConfig {
  double tol = 1e-10;
  long max_iter = 1'000'000;
  /// sigma in y = T x + sigma x^{[k-1]}; unset picks 0 for Q-type and 1 for
  /// adjacency-type operators.
  std::optional<double> shift;
  std::size_t threads = 1;

  double shift_or(double fallback) const { return shift.value_or(fallback); }
};

struct EigenPair {
  double lambda = 0.0;
  DenseVector vector;  // max entry 1
  double residual = 0.0;
  long iterations = 0;
  Bounds bracket{0.0, 0.0};  // certified enclosure of lambda
};

/// Optional per-iteration record of the (unshifted) bracket.
struct SolverTrace {
  std::vector<Bounds> brackets;
};

/// max_i |(T x)_i - lambda x_i^{k-1}|.
template <TensorOperator Op>
double residual(const Op& op, double lambda, std::span<const double> x) {
  if (x.size() != op.dim()) throw DimensionError("vector length != operator dim");
  const DenseVector y = op.apply(x);
  const double p = static_cast<double>(op.order() - 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(y[i] - lambda * std::pow(x[i], p)));
  return worst;
}

/// Shifted power iteration for a weakly irreducible nonnegative operator.
///
/// Each step forms y = T x + sigma x^{[k-1]}, records the Collatz-Wielandt
/// bracket [a, b] of y against x, and stops once b - a < tol. Then
/// lambda = (a + b)/2 - sigma and x is the vector the bracket was measured on.
/// Otherwise x <- y^{[1/(k-1)]}, normalized to max entry 1.
template <TensorOperator Op>
EigenPair largest_h_eigenvalue(const Op& op, const SolverConfig& cfg, SolverTrace* trace = nullptr) {
  if (!(cfg.tol > 0.0)) throw DomainError("solver tolerance must be > 0");
  if (cfg.max_iter < 1) throw DomainError("solver max_iter must be >= 1");
  const double sigma = cfg.shift_or(0.0);
  if (sigma < 0.0) throw DomainError("solver shift must be >= 0");
  if (op.order() < 2) throw DimensionError("tensor order must be >= 2 for H-eigenvalues");
  const std::size_t n = op.dim();
  if (n == 0) throw DimensionError("operator has dimension 0");

  const double p = static_cast<double>(op.order() - 1);
  DenseVector x(n, 1.0);
  DenseVector xp(n, 1.0);  // x^{[k-1]}
  Bounds last{0.0, 0.0};
  for (long it = 1; it <= cfg.max_iter; ++it) {
    DenseVector y = op.apply(x);
    double a = std::numeric_limits<double>::infinity();
    double b = -a;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += sigma * xp[i];
      if (y[i] < 0.0) throw DomainError("operator produced a negative value; input is not nonnegative");
      if (y[i] == 0.0) throw DomainError("row " + std::to_string(i) + " vanishes on a positive vector; use a shift");
      const double r = y[i] / xp[i];
      a = std::min(a, r);
      b = std::max(b, r);
    }
    last = {a - sigma, b - sigma};
    if (trace) trace->brackets.push_back(last);
    if (b - a < cfg.tol) {
      EigenPair out;
      out.lambda = 0.5 * (a + b) - sigma;
      out.residual = residual(op, out.lambda, x);
      out.vector = std::move(x);
      out.iterations = it;
      out.bracket = last;
      return out;
    }
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::pow(y[i], 1.0 / p);
      top = std::max(top, x[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      x[i] /= top;
      xp[i] = std::pow(x[i], p);
    }
  }
  std::ostringstream msg;
  msg << "power iteration did not converge in " << cfg.max_iter << " iterations; last bracket [" << last.lower
      << ", " << last.upper << "]";
  throw NotConverged(msg.str(), last.lower, last.upper, cfg.max_iter);
}

namespace detail {

inline EigenPair zero_pair(std::size_t n) {
  EigenPair out;
  out.vector.assign(n, 1.0);
  return out;
}

// Places a component's pair into the full index space (zeros elsewhere).
inline EigenPair embed_pair(const EigenPair& part, std::span<const std::size_t> positions, std::size_t n) {
  EigenPair out = part;
  out.vector.assign(n, 0.0);
  for (std::size_t i = 0; i < positions.size(); ++i) out.vector[positions[i]] = part.vector[i];
  return out;
}

}  // namespace detail

namespace detail {

// Extends a vector that solves T x = lambda x^{[k-1]} on one strong class to
// the classes upstream of it: x_i <- ((T x)_i / lambda)^{1/(k-1)} on every
// coordinate outside the class, starting from zero. The iterates increase
// monotonically and converge because every upstream class has a smaller
// spectral radius; coordinates that cannot reach the class stay zero.
inline void fill_upstream(const SparseTensor& t, double lambda, std::span<const std::size_t> fixed, DenseVector& x,
                          double tol) {
  if (!(lambda > 0.0)) return;
  std::vector<bool> free(t.dim(), true);
  for (std::size_t i : fixed) free[i] = false;
  const double p = static_cast<double>(t.order() - 1);
  for (long it = 0; it < 100'000; ++it) {
    const DenseVector y = tensor_apply(t, x);
    double change = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!free[i]) continue;
      const double next = std::pow(std::max(y[i], 0.0) / lambda, 1.0 / p);
      change = std::max(change, std::abs(next - x[i]));
      x[i] = next;
    }
    if (change < 1e-3 * tol) break;
  }
  const double top = *std::ranges::max_element(x);
  if (top > 0.0)
    for (double& v : x) v /= top;
}

}  // namespace detail

/// Largest H-eigenvalue of an explicit nonnegative tensor. A tensor that is not
/// weakly irreducible is split into strongly connected index classes; each
/// class's principal sub-tensor is solved and the maximum is returned. Among
/// tied classes the most upstream one is used, and its vector is extended to
/// the classes that feed into it.
inline EigenPair solve_tensor(const SparseTensor& t, const SolverConfig& cfg, SolverTrace* trace = nullptr) {
  if (!t.is_square()) throw DimensionError("solver needs a square tensor");
  if (!t.is_nonnegative()) throw DomainError("solver needs a nonnegative tensor");
  const auto classes = strong_components(index_digraph(t));
  if (classes.size() == 1) return largest_h_eigenvalue(t, cfg, trace);

  std::vector<EigenPair> parts;
  for (const auto& cls : classes) {
    EigenPair part;
    if (cls.size() == 1) {
      part = detail::zero_pair(1);
      part.lambda = t.at(Index(t.order(), cls[0]));
      part.bracket = {part.lambda, part.lambda};
    } else {
      part = solve_tensor(principal_subtensor(t, cls), cfg);
    }
    parts.push_back(std::move(part));
  }
  double top = 0.0;
  for (const auto& part : parts) top = std::max(top, part.lambda);
  // Among tied classes take one that no other tied class reaches.
  const auto adj = index_digraph(t);
  std::vector<std::size_t> tied;
  for (std::size_t c = 0; c < parts.size(); ++c)
    if (parts[c].lambda >= top - cfg.tol) tied.push_back(c);
  std::vector<bool> reached(parts.size(), false);
  for (std::size_t c : tied) {
    const auto seen = detail::reachable_from(adj, classes[c].front());
    for (std::size_t other : tied)
      if (other != c && seen[classes[other].front()]) reached[other] = true;
  }
  const std::size_t best = *std::ranges::find_if(tied, [&](std::size_t c) { return !reached[c]; });

  EigenPair out = detail::embed_pair(parts[best], classes[best], t.dim());
  detail::fill_upstream(t, out.lambda, classes[best], out.vector, cfg.tol);
  out.residual = residual(t, out.lambda, out.vector);
  return out;
}

/// Largest H-eigenvalue of A, Q or L(H) via the implicit operator, taken as the
/// maximum over connected components. L is only valid here when the caller has
/// reduced it to Q (see laplacian_radius_odd_bipartite).
inline EigenPair hypergraph_radius(const Hypergraph& h, TensorKind kind, const SolverConfig& cfg) {
  if (kind == TensorKind::Laplacian) throw DomainError("power iteration does not apply to L directly");
  SolverConfig local = cfg;
  if (!local.shift) local.shift = kind == TensorKind::Adjacency ? 1.0 : 0.0;
  if (h.m() == 0) return detail::zero_pair(h.n());
  if (h.is_connected()) return largest_h_eigenvalue(HypergraphOperator(h, kind, cfg.threads), local);

  std::optional<EigenPair> best;
  for (const auto& comp : h.components()) {
    const Hypergraph sub = h.induced(comp);
    EigenPair part = sub.m() == 0 ? detail::zero_pair(sub.n())
                                  : largest_h_eigenvalue(HypergraphOperator(sub, kind, cfg.threads), local);
    if (!best || part.lambda > best->lambda) best = detail::embed_pair(part, comp, h.n());
  }
  best->residual = residual(HypergraphOperator(h, kind, cfg.threads), best->lambda, best->vector);
  return *best;
}

inline EigenPair signless_radius(const Hypergraph& h, const SolverConfig& cfg = {}) {
  return hypergraph_radius(h, TensorKind::SignlessLaplacian, cfg);
}

inline EigenPair adjacency_radius(const Hypergraph& h, const SolverConfig& cfg = {}) {
  return hypergraph_radius(h, TensorKind::Adjacency, cfg);
}

struct LaplacianPair {
  EigenPair signless;          // Perron pair of Q
  DenseVector signed_vector;   // Q's Perron vector with signs flipped on V1
  double laplacian_residual;   // max_i |(L x')_i - lambda x'_i^{k-1}|
  Bipartition certificate;

  double lambda() const noexcept { return signless.lambda; }
};

/// lambda(L) = lambda(Q) for odd-bipartite H: flipping the sign of Q's Perron
/// vector on V1 turns it into an L-eigenvector for the same value.
inline LaplacianPair laplacian_radius_odd_bipartite(const Hypergraph& h, const SolverConfig& cfg = {}) {
  if (h.k() % 2 != 0) throw NotOddBipartite("odd k: odd-bipartiteness needs even k, got k=" + std::to_string(h.k()));
  auto cert = is_odd_bipartite(h);
  if (!cert) throw NotOddBipartite("hypergraph is not odd-bipartite");
  LaplacianPair out{signless_radius(h, cfg), {}, 0.0, std::move(*cert)};
  out.signed_vector = out.signless.vector;
  for (std::size_t v : out.certificate.first) out.signed_vector[v] = -out.signed_vector[v];
  out.laplacian_residual =
      residual(HypergraphOperator(h, TensorKind::Laplacian, cfg.threads), out.lambda(), out.signed_vector);
  if (!(out.laplacian_residual < cfg.tol))
    throw std::runtime_error("sign-flipped vector fails the Laplacian eigen equation (residual " +
                             std::to_string(out.laplacian_residual) + ")");
  return out;
}

/// lambda(B^{k,s}) of the quotient of Q(G^{k,s}); maximum over the connected
/// components of G. Vector coordinates: graph vertices, then graph edges.
inline EigenPair quotient_radius(const Graph& g, std::size_t k, std::size_t s, const SolverConfig& cfg = {}) {
  check_power_params(k, s);
  const std::size_t dim = quotient_dim(g, k, s);
  if (g.m() == 0) return detail::zero_pair(dim);
  if (g.is_connected()) return largest_h_eigenvalue(QuotientOperator(g, k, s), cfg);

  const bool cored = 2 * s < k;
  std::optional<EigenPair> best;
  for (const auto& comp : g.components()) {
    const Graph sub = g.induced(comp);
    std::vector<std::size_t> positions(comp.begin(), comp.end());
    if (cored)
      for (std::size_t j = 0; j < g.m(); ++j)
        if (std::ranges::binary_search(comp, g.edges()[j].first)) positions.push_back(g.n() + j);
    EigenPair part = sub.m() == 0 ? detail::zero_pair(positions.size())
                                  : largest_h_eigenvalue(QuotientOperator(sub, k, s), cfg);
    if (!best || part.lambda > best->lambda) best = detail::embed_pair(part, positions, dim);
  }
  best->residual = residual(QuotientOperator(g, k, s), best->lambda, best->vector);
  return *best;
}

struct GridPoint {
  std::size_t k;
  std::size_t s;
  EigenPair pair;
  double delta_gap;  // lambda - max degree
};

struct MonotonicityCheck {
  std::string name;
  bool passed;
  std::string detail;
};

struct MonotonicityReport {
  std::size_t max_degree = 0;
  std::vector<GridPoint> points;
  std::vector<MonotonicityCheck> checks;

  bool passed() const {
    return std::ranges::all_of(checks, [](const auto& c) { return c.passed; });
  }
};

/// Strictness margin for the monotonicity assertions.
inline constexpr double kMonotoneMargin = 1e-6;

/// Solves lambda(B^{k,s}) over the (k, s) grid and checks: strict decrease
/// in k for s < k/2, strict increase in s up to and including k/2, and
/// lambda > max degree for s < k/2 with the gap shrinking along k. For
/// max degree 1 the strict checks become "constant" checks.
inline MonotonicityReport verify_monotonicity(const Graph& g, std::vector<std::size_t> ks, std::vector<std::size_t> ss,
                                              const SolverConfig& cfg = {}) {
  if (!g.is_connected()) throw DomainError("monotonicity harness needs a connected graph");
  if (g.max_degree() < 1) throw DomainError("monotonicity harness needs at least one edge");
  std::ranges::sort(ks);
  std::ranges::sort(ss);
  MonotonicityReport rep;
  rep.max_degree = g.max_degree();
  const double delta = static_cast<double>(rep.max_degree);
  const bool strict = rep.max_degree >= 2;

  std::map<std::pair<std::size_t, std::size_t>, double> lam;
  for (std::size_t k : ks)
    for (std::size_t s : ss) {
      if (k < 3 || s < 1 || 2 * s > k) continue;
      EigenPair pr = quotient_radius(g, k, s, cfg);
      lam[{k, s}] = pr.lambda;
      rep.points.push_back({k, s, pr, pr.lambda - delta});
    }

  auto fmt = [](double v) {
    std::ostringstream o;
    o.precision(12);
    o << v;
    return o.str();
  };

  // Along k at fixed s < k/2.
  for (std::size_t s : ss) {
    std::vector<std::size_t> seq;
    for (std::size_t k : ks)
      if (lam.contains({k, s}) && 2 * s < k) seq.push_back(k);
    if (seq.size() < 2) continue;
    MonotonicityCheck dec{(strict ? "decreasing-in-k s=" : "constant-in-k s=") + std::to_string(s), true, ""};
    MonotonicityCheck gap{"gap-shrinks-in-k s=" + std::to_string(s), true, ""};
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      const double a = lam[{seq[i], s}], b = lam[{seq[i + 1], s}];
      const bool ok = strict ? a - b > kMonotoneMargin : std::abs(a - b) <= kMonotoneMargin;
      if (!ok) {
        dec.passed = false;
        dec.detail += "k=" + std::to_string(seq[i]) + "->" + std::to_string(seq[i + 1]) + ": " + fmt(a) + " vs " +
                      fmt(b) + "; ";
      }
      const double ga = a - delta, gb = b - delta;
      if (!(gb > 0.0 && (strict ? ga - gb > kMonotoneMargin : gb <= ga + kMonotoneMargin))) {
        gap.passed = false;
        gap.detail += "k=" + std::to_string(seq[i + 1]) + ": gap " + fmt(gb) + "; ";
      }
    }
    rep.checks.push_back(std::move(dec));
    rep.checks.push_back(std::move(gap));
  }

  // Along s at fixed k, including s = k/2.
  for (std::size_t k : ks) {
    std::vector<std::size_t> seq;
    for (std::size_t s : ss)
      if (lam.contains({k, s})) seq.push_back(s);
    if (seq.size() < 2) continue;
    MonotonicityCheck inc{(strict ? "increasing-in-s k=" : "constant-in-s k=") + std::to_string(k), true, ""};
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      const double a = lam[{k, seq[i]}], b = lam[{k, seq[i + 1]}];
      const bool ok = strict ? b - a > kMonotoneMargin : std::abs(a - b) <= kMonotoneMargin;
      if (!ok) {
        inc.passed = false;
        inc.detail += "s=" + std::to_string(seq[i]) + "->" + std::to_string(seq[i + 1]) + ": " + fmt(a) + " vs " +
                      fmt(b) + "; ";
      }
    }
    rep.checks.push_back(std::move(inc));
  }

  MonotonicityCheck above{"exceeds-max-degree", true, ""};
  bool any = false;
  for (const auto& pt : rep.points) {
    if (2 * pt.s >= pt.k) continue;
    any = true;
    if (!(pt.delta_gap > kMonotoneMargin)) {
      above.passed = false;
      above.detail += "k=" + std::to_string(pt.k) + " s=" + std::to_string(pt.s) + ": " + fmt(pt.pair.lambda) + "; ";
    }
  }
  if (any) rep.checks.push_back(std::move(above));
  return rep;
}

}  // namespace hyperpower
