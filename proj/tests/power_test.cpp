#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hyperpower/hyperpower.hpp"
#include "test_support.hpp"

namespace hp = hyperpower;
using hp::DenseVector;
using hp::Graph;

namespace {

// Largest roots of (x-d)(x-1)^{(k-2s)/(2s)} = d, computed independently with
// Brent's method to 1e-15 and frozen here.
constexpr double kRootD2K6S1 = 2.695620769559862;
constexpr double kRootD2K8S1 = 2.5436890126920764;
constexpr double kRootD3K6S1 = 3.4855839976886003;

}  // namespace

TEST(BuildGeneralizedPower, K2AndK3) {
  const auto k2 = hp::build_generalized_power(Graph::complete(2), 4, 1);
  EXPECT_EQ(k2.hypergraph.n(), 4u);
  ASSERT_EQ(k2.hypergraph.m(), 1u);
  EXPECT_EQ(k2.hypergraph.edges()[0], (std::vector<std::size_t>{0, 1, 2, 3}));

  const auto k3 = hp::build_generalized_power(Graph::complete(3), 4, 1);
  EXPECT_EQ(k3.hypergraph.n(), 9u);
  ASSERT_EQ(k3.hypergraph.m(), 3u);
  // Edge j = uv holds u, v and the cores 3 + 2j, 4 + 2j; edges are stored sorted.
  EXPECT_EQ(k3.hypergraph.edges()[0], (std::vector<std::size_t>{0, 1, 3, 4}));
  EXPECT_EQ(k3.hypergraph.edges()[1], (std::vector<std::size_t>{0, 2, 5, 6}));
  EXPECT_EQ(k3.hypergraph.edges()[2], (std::vector<std::size_t>{1, 2, 7, 8}));
}

TEST(BuildGeneralizedPower, OrderTwoReproducesGraph) {
  const Graph g(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  EXPECT_EQ(hp::build_generalized_power(g, 2, 1).hypergraph, hp::as_hypergraph(g));
}

TEST(BuildGeneralizedPower, RejectsBadParameters) {
  EXPECT_THROW(hp::build_generalized_power(Graph::complete(3), 4, 3), hp::ParameterError);
  EXPECT_THROW(hp::build_generalized_power(Graph::complete(3), 4, 0), hp::ParameterError);
  EXPECT_THROW(hp::build_generalized_power(Graph::complete(3), 1, 1), hp::ParameterError);
}

TEST(BuildGeneralizedPower, SizesAndLabelingCover) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = hp::testing::random_connected_graph(2 + trial % 5, 0.5, rng);
    for (std::size_t k = 2; k <= 8; ++k)
      for (std::size_t s = 1; 2 * s <= k; ++s) {
        const auto p = hp::build_generalized_power(g, k, s);
        EXPECT_EQ(p.hypergraph.n(), g.n() * s + g.m() * (k - 2 * s));
        EXPECT_EQ(p.hypergraph.m(), g.m());
        EXPECT_EQ(p.labeling.vertex_count(), p.hypergraph.n());
        // Partition ctor checks the blocks are disjoint and cover.
        const auto part = hp::natural_partition(p.labeling);
        EXPECT_EQ(part.n(), p.hypergraph.n());
      }
  }
}

TEST(NaturalPartition, Examples) {
  const auto k3 = hp::build_generalized_power(Graph::complete(3), 4, 1);
  const auto p = hp::natural_partition(k3.labeling);
  ASSERT_EQ(p.size(), 6u);
  for (std::size_t v = 0; v < 3; ++v) EXPECT_EQ(p.block(v), (std::vector<std::size_t>{v}));
  EXPECT_EQ(p.block(3), (std::vector<std::size_t>{3, 4}));
  EXPECT_EQ(p.block(5), (std::vector<std::size_t>{7, 8}));

  const auto full = hp::natural_partition(hp::build_generalized_power(Graph::complete(3), 4, 2).labeling);
  ASSERT_EQ(full.size(), 3u);
  EXPECT_EQ(full.block(2), (std::vector<std::size_t>{4, 5}));

  const auto k2 = hp::natural_partition(hp::build_generalized_power(Graph::complete(2), 6, 1).labeling);
  EXPECT_EQ(k2.blocks(), (std::vector<std::vector<std::size_t>>{{0}, {1}, {2, 3, 4, 5}}));
}

TEST(QuotientClosedForm, RowSumsOfK3) {
  const auto b = hp::quotient_closed_form(Graph::complete(3), 4, 1);
  ASSERT_EQ(b.dim(), 6u);
  DenseVector sums(6, 0.0);
  for (const auto& [idx, v] : b.entries()) sums[idx[0]] += v;
  for (std::size_t v = 0; v < 3; ++v) EXPECT_NEAR(sums[v], 4.0, 1e-14);
  for (std::size_t e = 3; e < 6; ++e) EXPECT_NEAR(sums[e], 2.0, 1e-14);
  // Case values: vertex rows 0! 1! 2! / 3! = 1/3, edge rows 1! 1! 1! / 3! = 1/6.
  EXPECT_NEAR(b.at({0, 1, 3, 3}), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(b.at({3, 0, 1, 3}), 1.0 / 6.0, 1e-15);
  EXPECT_EQ(b.at({3, 3, 3, 3}), 1.0);
  EXPECT_EQ(b.at({0, 0, 0, 0}), 2.0);
  EXPECT_EQ(b.at({0, 2, 3, 3}), 0.0);  // edge 0 = {0,1} does not contain vertex 2
}

TEST(QuotientClosedForm, MatchesQuotientOfMaterializedSignless) {
  std::mt19937 rng(6);
  std::vector<Graph> graphs{Graph::complete(3), Graph::path(4), Graph::star(3)};
  for (int t = 0; t < 4; ++t) graphs.push_back(hp::testing::random_connected_graph(3 + t % 3, 0.4, rng));
  for (const auto& g : graphs)
    for (std::size_t k = 3; k <= 6; ++k)
      for (std::size_t s = 1; 2 * s <= k; ++s) {
        const auto p = hp::build_generalized_power(g, k, s);
        const auto q = hp::materialize(p.hypergraph, hp::TensorKind::SignlessLaplacian);
        const auto via_partition = hp::quotient_tensor(q, hp::natural_partition(p.labeling));
        EXPECT_LT(hp::max_abs_difference(via_partition, hp::quotient_closed_form(g, k, s)), 1e-12)
            << "k=" << k << " s=" << s;
      }
}

TEST(QuotientClosedForm, FullPowerOfK3) {
  const auto b = hp::quotient_closed_form(Graph::complete(3), 4, 2);
  ASSERT_EQ(b.dim(), 3u);
  const auto y = hp::tensor_apply(b, DenseVector(3, 1.0));
  for (double v : y) EXPECT_NEAR(v, 4.0, 1e-14);
  // Vertex row d_v x_v^3 + sum_u x_u^2 x_v at a non-constant vector.
  const DenseVector x{1.0, 2.0, 0.5};
  const auto bx = hp::tensor_apply(b, x);
  for (std::size_t v = 0; v < 3; ++v) {
    double expect = 2.0 * std::pow(x[v], 3);
    for (std::size_t u = 0; u < 3; ++u)
      if (u != v) expect += x[u] * x[u] * x[v];
    EXPECT_NEAR(bx[v], expect, 1e-13);
  }
}

TEST(QuotientApply, Examples) {
  const auto y = hp::quotient_apply(Graph::complete(3), 4, 1, DenseVector(6, 1.0));
  EXPECT_EQ(y, (DenseVector{4, 4, 4, 2, 2, 2}));
  EXPECT_EQ(hp::quotient_apply(Graph::complete(2), 4, 1, DenseVector(3, 1.0)), (DenseVector{2, 2, 2}));
  EXPECT_THROW(hp::quotient_apply(Graph::complete(3), 4, 1, DenseVector(3, 1.0)), hp::DimensionError);
}

TEST(QuotientApply, MatchesClosedFormTensor) {
  std::mt19937 rng(10);
  for (int trial = 0; trial < 12; ++trial) {
    const auto g = hp::testing::random_connected_graph(2 + trial % 5, 0.5, rng);
    for (std::size_t k = 3; k <= 8; ++k)
      for (std::size_t s = 1; 2 * s <= k; ++s) {
        const auto b = hp::quotient_closed_form(g, k, s);
        for (int r = 0; r < 20; ++r) {
          const auto x = hp::testing::random_positive(b.dim(), rng);
          ASSERT_LT(hp::testing::rel_diff(hp::quotient_apply(g, k, s, x), hp::tensor_apply(b, x)), 1e-12)
              << "k=" << k << " s=" << s;
        }
      }
  }
}

TEST(RegularRadius, Anchors) {
  for (std::size_t k : {3u, 4u, 6u, 9u})
    for (std::size_t s = 1; 2 * s + 1 <= k; ++s) EXPECT_EQ(hp::regular_radius(1, k, s), 2.0);
  EXPECT_EQ(hp::regular_radius(2, 4, 1), 3.0);
  EXPECT_EQ(hp::regular_radius(5, 8, 2), 6.0);
  EXPECT_NEAR(hp::regular_radius(2, 6, 1), kRootD2K6S1, 1e-11);
  EXPECT_NEAR(hp::regular_radius(2, 8, 1), kRootD2K8S1, 1e-11);
  EXPECT_NEAR(hp::regular_radius(3, 6, 1), kRootD3K6S1, 1e-11);
  // Cubic x^3 - 4x^2 + 5x - 4 vanishes at the d=2, k=6, s=1 root.
  const double r = hp::regular_radius(2, 6, 1);
  EXPECT_NEAR(((r - 4.0) * r + 5.0) * r - 4.0, 0.0, 1e-10);
  EXPECT_THROW(hp::regular_radius(2, 4, 2), hp::ParameterError);
  EXPECT_THROW(hp::regular_radius(0, 4, 1), hp::ParameterError);
}

TEST(RegularRadius, MonotoneInKAndS) {
  for (std::size_t d : {2u, 3u, 5u}) {
    for (std::size_t s : {1u, 2u}) {
      double prev = 1e300;
      for (std::size_t k = 2 * s + 1; k <= 30; ++k) {
        const double r = hp::regular_radius(d, k, s);
        EXPECT_GT(r, static_cast<double>(d));
        EXPECT_LT(r, prev);
        prev = r;
      }
    }
    for (std::size_t k : {7u, 9u, 12u}) {
      double prev = 0.0;
      for (std::size_t s = 1; 2 * s + 1 <= k; ++s) {
        const double r = hp::regular_radius(d, k, s);
        EXPECT_GT(r, prev);
        prev = r;
      }
    }
  }
}

TEST(RegularPerronVector, EdgeEntriesAndResidual) {
  const auto y = hp::regular_perron_vector(Graph::complete(3), 4, 1, 3.0);
  for (std::size_t v = 0; v < 3; ++v) EXPECT_EQ(y[v], 1.0);
  for (std::size_t e = 3; e < 6; ++e) EXPECT_NEAR(y[e], 1.0 / std::sqrt(2.0), 1e-15);

  const auto y1 = hp::regular_perron_vector(Graph::complete(2), 6, 1, hp::regular_radius(1, 6, 1));
  EXPECT_EQ(y1[2], 1.0);

  const Graph k4 = Graph::complete(4);
  const double lam = hp::regular_radius(3, 6, 1);
  const auto y3 = hp::regular_perron_vector(k4, 6, 1, lam);
  EXPECT_LT(hp::residual(hp::QuotientOperator(k4, 6, 1), lam, y3), 1e-10);

  EXPECT_THROW(hp::regular_perron_vector(Graph::complete(3), 4, 1, 1.0), hp::DomainError);
  EXPECT_THROW(hp::regular_perron_vector(Graph::path(3), 4, 1, 3.0), hp::DomainError);
}

namespace {

void expect_regular_embedding(const Graph& g) {
  const Graph r = hp::embed_in_regular(g);
  EXPECT_TRUE(r.is_regular());
  EXPECT_EQ(r.max_degree(), g.max_degree());
  std::vector<std::size_t> first(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) first[i] = i;
  const Graph induced = r.induced(first);
  for (std::size_t u = 0; u < g.n(); ++u)
    for (std::size_t v = u + 1; v < g.n(); ++v) EXPECT_EQ(induced.has_edge(u, v), g.has_edge(u, v));
}

}  // namespace

TEST(EmbedInRegular, Examples) {
  EXPECT_EQ(hp::embed_in_regular(Graph::complete(4)), Graph::complete(4));
  EXPECT_EQ(hp::embed_in_regular(Graph(3, {})), Graph(3, {}));
  expect_regular_embedding(Graph::path(3));
  expect_regular_embedding(Graph::star(3));
  expect_regular_embedding(Graph::path(5));
}

TEST(EmbedInRegular, RandomGraphs) {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 15; ++trial) expect_regular_embedding(hp::testing::random_connected_graph(3 + trial % 5, 0.3, rng));
}
