// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hyperpower/hyperpower.hpp"
#include "test_support.hpp"

namespace hp = hyperpower;
using hp::DenseVector;
using hp::Graph;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (passed) detail << why;
    else if (detail.tellp() < 400) detail << "; " << why;
    passed = false;
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string tag(const Graph& g, std::size_t k, std::size_t s) {
  return "n=" + std::to_string(g.n()) + " m=" + std::to_string(g.m()) + " k=" + std::to_string(k) +
         " s=" + std::to_string(s);
}

struct Instance {
  Graph g;
  std::size_t k;
  std::size_t s;
};

// Ten random connected graphs, each with every k in 3..6 and every valid s.
std::vector<Instance> random_instances() {
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<std::size_t> size(2, 6);
  std::vector<Instance> out;
  for (int i = 0; i < 10; ++i) {
    const Graph g = hp::testing::random_connected_graph(size(rng), 0.45, rng);
    for (std::size_t k = 3; k <= 6; ++k)
      for (std::size_t s = 1; 2 * s <= k; ++s) out.push_back({g, k, s});
  }
  return out;
}

// Natural partition of a cored power with the block of a vertex w of degree
// >= 2 merged into the core block of an edge at w. The diagonal of Q is d_w on
// one side and 1 on the other, so the merged block cannot be equitable.
std::optional<hp::Partition> merged_partition(const hp::GenPowerLabeling& lab, const Graph& g) {
  if (2 * lab.s >= lab.k || g.max_degree() < 2) return std::nullopt;
  std::size_t w = 0;
  while (g.degree(w) < 2) ++w;
  const std::size_t e = g.incident_edges(w).front();
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t v = 0; v < lab.vertex_blocks.size(); ++v) {
    blocks.push_back(lab.vertex_blocks[v]);
    if (v == w) blocks.back().insert(blocks.back().end(), lab.edge_blocks[e].begin(), lab.edge_blocks[e].end());
  }
  for (std::size_t j = 0; j < lab.edge_blocks.size(); ++j)
    if (j != e) blocks.push_back(lab.edge_blocks[j]);
  return hp::Partition(std::move(blocks));
}

Outcome closed_form_agreement() {
  Outcome o;
  for (std::size_t d : {2u, 3u})
    for (std::size_t k : {4u, 6u, 8u})
      for (std::size_t s : {1u, 2u}) {
        if (2 * s + 1 > k) continue;
        const Graph g = Graph::complete(d + 1);
        const auto start = std::chrono::steady_clock::now();
        const double lam = hp::signless_radius(hp::build_generalized_power(g, k, s).hypergraph).lambda;
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const double ref = hp::regular_radius(d, k, s);
        if (!(std::abs(lam - ref) < 1e-6))
          o.fail("d=" + std::to_string(d) + " " + tag(g, k, s) + ": " + num(lam) + " vs " + num(ref));
        if (!(secs < 5.0)) o.fail(tag(g, k, s) + " took " + num(secs) + " s");
      }
  if (hp::regular_radius(2, 4, 1) != 3.0) o.fail("d=2 k=4 s=1 root " + num(hp::regular_radius(2, 4, 1)));
  for (std::size_t k : {3u, 4u, 5u, 8u, 40u})
    for (std::size_t s = 1; 2 * s + 1 <= k; s += (k > 8 ? 5 : 1))
      if (hp::regular_radius(1, k, s) != 2.0) o.fail("d=1 k=" + std::to_string(k) + " root " + num(hp::regular_radius(1, k, s)));
  return o;
}

Outcome quotient_compression(const std::vector<Instance>& cases) {
  Outcome o;
  for (const auto& [g, k, s] : cases) {
    const auto power = hp::build_generalized_power(g, k, s);
    const auto full = hp::signless_radius(power.hypergraph);
    const auto quot = hp::quotient_radius(g, k, s);
    if (!(std::abs(full.lambda - quot.lambda) < 1e-6))
      o.fail(tag(g, k, s) + ": full " + num(full.lambda) + " quotient " + num(quot.lambda));
    const DenseVector lifted = hp::lift_eigenvector(hp::natural_partition(power.labeling), quot.vector);
    const double res =
        hp::residual(hp::HypergraphOperator(power.hypergraph, hp::TensorKind::SignlessLaplacian), quot.lambda, lifted);
    if (!(res < 1e-8)) o.fail(tag(g, k, s) + ": lifted residual " + num(res));
  }
  return o;
}

Outcome intertwining(const std::vector<Instance>& cases) {
  Outcome o;
  std::size_t broken = 0;
  for (const auto& [g, k, s] : cases) {
    const auto power = hp::build_generalized_power(g, k, s);
    const auto q = hp::materialize(power.hypergraph, hp::TensorKind::SignlessLaplacian);
    const auto natural = hp::natural_partition(power.labeling);
    const auto x = hp::characteristic_matrix(natural);
    const auto b = hp::quotient_closed_form(g, k, s);
    const double gap = hp::max_abs_difference(hp::general_product(q, x), hp::general_product(x, b));
    if (!(gap <= 1e-12)) o.fail(tag(g, k, s) + ": |QX - XB| = " + num(gap));
    if (!hp::is_equitable(q, natural)) o.fail(tag(g, k, s) + ": natural partition not equitable");

    const auto merged = merged_partition(power.labeling, g);
    if (!merged) continue;
    ++broken;
    if (hp::is_equitable(q, *merged)) o.fail(tag(g, k, s) + ": merged partition reported equitable");
    if (hp::verify_intertwine(q, *merged, hp::quotient_tensor(q, *merged)))
      o.fail(tag(g, k, s) + ": merged partition intertwines");
  }
  if (broken == 0) o.fail("no instance with a merged partition");
  return o;
}

Outcome monotonicity() {
  Outcome o;
  for (const Graph& g : {Graph::complete(3), Graph::path(4)}) {
    const auto rep = hp::verify_monotonicity(g, {4, 5, 6, 7, 8}, {1, 2, 3, 4});
    for (const auto& c : rep.checks)
      if (!c.passed) o.fail("n=" + std::to_string(g.n()) + " " + c.name + ": " + c.detail);
    for (const char* needed : {"decreasing-in-k", "increasing-in-s", "exceeds-max-degree"})
      if (std::ranges::none_of(rep.checks, [&](const auto& c) { return c.name.starts_with(needed); }))
        o.fail(std::string("missing check ") + needed);
    // s = k/2 must be part of the increasing-in-s sequence.
    if (std::ranges::none_of(rep.points, [](const auto& p) { return 2 * p.s == p.k; })) o.fail("no s = k/2 point");
  }
  const auto k2 = hp::verify_monotonicity(Graph::complete(2), {4, 5, 6, 7, 8}, {1, 2, 3, 4});
  for (const auto& pt : k2.points)
    if (!(std::abs(pt.pair.lambda - 2.0) < 1e-6))
      o.fail("K2 k=" + std::to_string(pt.k) + " s=" + std::to_string(pt.s) + ": " + num(pt.pair.lambda));
  if (!k2.passed()) o.fail("K2 constant checks failed");
  return o;
}

Outcome limit() {
  Outcome o;
  std::vector<double> gaps;
  for (std::size_t k : {10u, 20u, 40u}) {
    gaps.push_back(hp::regular_radius(2, k, 1) - 2.0);
    o.detail << (gaps.size() == 1 ? "" : ", ") << "k=" << k << " gap " << num(gaps.back());
  }
  const bool positive = std::ranges::all_of(gaps, [](double v) { return v > 0.0; });
  const bool decreasing = gaps[0] > gaps[1] && gaps[1] > gaps[2];
  const bool small = gaps[2] < 0.05;
  o.passed = positive && decreasing && small;
  if (!positive) o.detail << "; not all positive";
  if (!decreasing) o.detail << "; not strictly decreasing";
  if (!small) o.detail << "; k=40 gap not < 0.05";
  return o;
}

Outcome odd_bipartite_route(const std::vector<Instance>& cases) {
  Outcome o;
  for (const auto& [g, k, s] : cases) {
    if (k % 2 != 0 || 2 * s >= k) continue;
    const auto h = hp::build_generalized_power(g, k, s).hypergraph;
    const auto cert = hp::is_odd_bipartite(h);
    if (!cert || !hp::verify_odd_bipartite(h, cert->first)) {
      o.fail(tag(g, k, s) + ": no odd-bipartite certificate");
      continue;
    }
    const auto pair = hp::laplacian_radius_odd_bipartite(h);
    const double q = hp::signless_radius(h).lambda;
    if (!(std::abs(pair.lambda() - q) < 1e-6)) o.fail(tag(g, k, s) + ": L " + num(pair.lambda()) + " Q " + num(q));
    if (!(pair.laplacian_residual < 1e-8)) o.fail(tag(g, k, s) + ": flip residual " + num(pair.laplacian_residual));
  }
  for (std::size_t k : {4u, 6u}) {
    if (hp::is_odd_bipartite(hp::build_generalized_power(Graph::complete(3), k, k / 2).hypergraph))
      o.fail("K3 k=" + std::to_string(k) + " s=k/2 has a certificate");
    const auto c4 = hp::build_generalized_power(Graph::cycle(4), k, k / 2).hypergraph;
    const auto cert = hp::is_odd_bipartite(c4);
    if (!cert || !hp::verify_odd_bipartite(c4, cert->first))
      o.fail("C4 k=" + std::to_string(k) + " s=k/2 has no certificate");
  }
  return o;
}

Outcome perron_identities(const std::vector<Instance>& cases) {
  Outcome o;
  std::size_t checked = 0;
  for (const auto& [g, k, s] : cases) {
    if (2 * s >= k) continue;
    ++checked;
    const auto pair = hp::quotient_radius(g, k, s);
    const auto& y = pair.vector;
    const double lam = pair.lambda;
    const double scale = std::pow(lam - 1.0, 1.0 / static_cast<double>(s));
    const std::size_t n = g.n();
    for (std::size_t j = 0; j < g.m(); ++j) {
      const auto [u, v] = g.edges()[j];
      const double expect = std::sqrt(y[u] * y[v] / scale);
      if (!(std::abs(y[n + j] - expect) < 1e-8))
        o.fail(tag(g, k, s) + " edge " + std::to_string(j) + ": " + num(y[n + j]) + " vs " + num(expect));
    }
    for (std::size_t v = 0; v < n; ++v) {
      const double lhs = (lam - static_cast<double>(g.degree(v))) / (lam - 1.0);
      double rhs = 0.0;
      for (std::size_t u : g.neighbors(v)) rhs += std::pow(y[u] / (scale * y[v]), static_cast<double>(k) / 2.0);
      if (!(std::abs(lhs - rhs) < 1e-8))
        o.fail(tag(g, k, s) + " vertex " + std::to_string(v) + ": " + num(lhs) + " vs " + num(rhs));
    }
  }
  if (checked == 0) o.fail("no cored instances");
  return o;
}

Outcome solver_soundness() {
  Outcome o;
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> order(2, 4), dim(1, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = hp::testing::random_irreducible_tensor(order(rng), dim(rng), rng);
    hp::SolverTrace trace;
    const auto r = hp::solve_tensor(t, {}, &trace);
    const double slack = 1e-12 * std::max(1.0, r.lambda);
    for (std::size_t it = 0; it < trace.brackets.size(); ++it) {
      const auto& b = trace.brackets[it];
      if (!(b.lower <= r.lambda + slack && r.lambda <= b.upper + slack))
        o.fail("trial " + std::to_string(trial) + " iteration " + std::to_string(it + 1) + ": [" + num(b.lower) +
               ", " + num(b.upper) + "] misses " + num(r.lambda));
    }
    if (trace.brackets.empty()) o.fail("trial " + std::to_string(trial) + ": empty trace");
    const auto d = hp::testing::random_positive(t.dim(), rng, 0.2, 5.0);
    const double sim = hp::solve_tensor(hp::diagonal_similarity(t, d), {}).lambda;
    if (!(std::abs(sim - r.lambda) < 1e-6))
      o.fail("trial " + std::to_string(trial) + ": similarity " + num(sim) + " vs " + num(r.lambda));
  }
  return o;
}

}  // namespace

int main() {
  const auto cases = random_instances();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"closed-form agreement on d-regular graphs", closed_form_agreement},
      {"quotient compression correctness", [&] { return quotient_compression(cases); }},
      {"intertwining of the natural partition", [&] { return intertwining(cases); }},
      {"monotonicity in k and s", monotonicity},
      {"limit towards the max degree", limit},
      {"odd-bipartite route for L", [&] { return odd_bipartite_route(cases); }},
      {"Perron-structure identities", [&] { return perron_identities(cases); }},
      {"solver soundness", solver_soundness},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const std::string detail = o.detail.str();
    std::printf("%s %zu %s%s%s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                detail.empty() ? "" : " : ", detail.c_str());
    if (!o.passed) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
