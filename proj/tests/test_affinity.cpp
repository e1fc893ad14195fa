#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "random_graphs.hpp"
#include "tpgm/affinity.hpp"
#include "tpgm/error.hpp"
#include "tpgm/oracles.hpp"

using namespace tpgm;

namespace {

AffinityConfig with_kernels(KernelKind node, KernelKind edge) {
  AffinityConfig c;
  c.node_kernel = node;
  c.edge_kernel = edge;
  return c;
}

}  // namespace

TEST(NodeAffinity, GaussianSamePoint) {
  EXPECT_DOUBLE_EQ(node_affinity({}, Vector{0.7}, Vector{0.7}), 1.0);
}

TEST(NodeAffinity, GaussianScalar) {
  EXPECT_NEAR(node_affinity({}, Vector{0.0}, Vector{0.3}), 0.548812, 1e-6);
  EXPECT_NEAR(node_affinity({}, Vector{0.0}, Vector{0.3}), std::exp(-0.09 / 0.15), 1e-15);
}

TEST(NodeAffinity, DotProductOrthogonal) {
  const auto c = with_kernels(KernelKind::dot_product, KernelKind::gaussian);
  EXPECT_EQ(node_affinity(c, Vector{1.0, 0.0}, Vector{0.0, 1.0}), 0.0);
  EXPECT_EQ(node_affinity(c, Vector{1.0, 0.0}, Vector{-1.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(node_affinity(c, Vector{1.0, 2.0}, Vector{3.0, 1.0}), 5.0);
}

TEST(NodeAffinity, KindAndDimensionErrors) {
  EXPECT_THROW(node_affinity({}, Vector{0.1}, Vector{0.1, 0.2}), Error);
  EXPECT_THROW(node_affinity({}, Vector{0.1}, PointSet{{0.1}}), Error);
}

TEST(EdgeAffinity, Examples) {
  EXPECT_DOUBLE_EQ(edge_affinity({}, Vector{0.4}, Vector{0.4}), 1.0);
  EXPECT_THROW(edge_affinity({}, Vector{0.2}, Vector{0.2, 0.9}), Error);
  EXPECT_NEAR(edge_affinity({}, Vector{0.5}, Vector{0.65}), 0.860708, 1e-6);
}

TEST(EdgeAffinity, ExpNegDistance) {
  const auto c = with_kernels(KernelKind::gaussian, KernelKind::exp_neg_distance);
  EXPECT_NEAR(edge_affinity(c, Vector{0.0, 0.0}, Vector{3.0, 4.0}), std::exp(-5.0), 1e-15);
}

TEST(Config, BandwidthMustBePositive) {
  AffinityConfig c;
  c.bandwidth = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c.bandwidth = -1.0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Hausdorff, Examples) {
  EXPECT_EQ(modified_hausdorff({{0, 0}, {1, 1}}, {{0, 0}, {1, 1}}), 0.0);
  EXPECT_DOUBLE_EQ(modified_hausdorff({{0, 0}}, {{3, 4}}), 10.0);
  EXPECT_DOUBLE_EQ(modified_hausdorff({{0, 0}, {1, 0}}, {{0, 0}}), 1.0);
}

TEST(Hausdorff, Errors) {
  EXPECT_THROW(modified_hausdorff({}, {{0, 0}}), Error);
  EXPECT_THROW(modified_hausdorff({{0, 0}}, {{0, 0, 0}}), Error);
}

TEST(Hausdorff, SymmetricExactly) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    PointSet a(1 + t % 4, Vector(3)), b(1 + t % 7, Vector(3));
    for (auto& p : a)
      for (double& x : p) x = u(rng);
    for (auto& p : b)
      for (double& x : p) x = u(rng);
    EXPECT_EQ(modified_hausdorff(a, b), modified_hausdorff(b, a));
  }
}

TEST(Hausdorff, KernelOnPointSets) {
  const auto c = with_kernels(KernelKind::exp_neg_hausdorff, KernelKind::gaussian);
  EXPECT_NEAR(node_affinity(c, PointSet{{0, 0}}, PointSet{{3, 4}}), std::exp(-10.0), 1e-18);
}

TEST(Gaussian, MonotoneInDistance) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> d(200);
  for (double& x : d) x = u(rng);
  std::sort(d.begin(), d.end());
  double prev = 2.0;
  for (double x : d) {
    const double k = node_affinity({}, Vector{0.0}, Vector{x});
    EXPECT_LE(k, prev);
    prev = k;
  }
}

TEST(AffinityMatrix, SingleNode) {
  const AttributedGraph g({Vector{0.3}}, {}, true);
  const auto k = build_affinity_matrix(g, g, {});
  ASSERT_EQ(k.rows(), 1u);
  EXPECT_DOUBLE_EQ(k.at(0, 0), 1.0);
}

TEST(AffinityMatrix, PathVersusPath) {
  const AttributedGraph g({Vector{0.0}, Vector{0.3}}, {{0, 1, {0.5}}}, true);
  const auto k = build_affinity_matrix(g, g, {});
  const double kv = std::exp(-0.09 / 0.15);
  ASSERT_EQ(k.rows(), 4u);
  EXPECT_DOUBLE_EQ(k.at(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(k.at(1, 1), kv);
  EXPECT_DOUBLE_EQ(k.at(2, 2), kv);
  EXPECT_DOUBLE_EQ(k.at(3, 3), 1.0);
  // The only arc pair is (0->1, 0->1): pair (0,0) to pair (1,1).
  EXPECT_EQ(k.nnz(), 5u);
  EXPECT_DOUBLE_EQ(k.at(0, 3), 1.0);
  EXPECT_EQ(k.at(3, 0), 0.0);
}

TEST(AffinityMatrix, NoArcsMeansDiagonal) {
  std::mt19937_64 rng(13);
  const auto g1 = testgen::random_graph(rng, 4, 0.0);
  const auto g2 = testgen::random_graph(rng, 5, 0.6);
  const auto k = build_affinity_matrix(g1, g2, {});
  EXPECT_EQ(k.nnz(), 20u);
  for (std::size_t r = 0; r < k.rows(); ++r)
    for (auto c : k.row_cols(r)) EXPECT_EQ(c, r);
}

TEST(AffinityMatrix, SymmetricForUndirected) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 20; ++t) {
    const auto g1 = testgen::random_graph(rng, 5, 0.5, false);
    const auto g2 = testgen::random_graph(rng, 4, 0.5, false);
    const auto k = build_affinity_matrix(g1, g2, {});
    for (std::size_t r = 0; r < k.rows(); ++r)
      for (std::size_t c = 0; c < k.cols(); ++c) EXPECT_NEAR(k.at(r, c), k.at(c, r), 1e-12);
  }
}

TEST(Qap, Examples) {
  const AttributedGraph g({Vector{0.0}, Vector{0.3}}, {{0, 1, {0.5}}}, true);
  const auto k = build_affinity_matrix(g, g, {});
  EXPECT_EQ(qap_objective(k, Assignment(2, 2)), 0.0);
  const auto k1 = SparseMatrix::from_triplets(1, 1, {{0, 0, 0.9}});
  EXPECT_DOUBLE_EQ(qap_objective(k1, Assignment::identity(1)), 0.9);
  // Identity on the path: both diagonal terms plus the single arc pair.
  EXPECT_DOUBLE_EQ(qap_objective(k, Assignment::identity(2)), 3.0);
  EXPECT_THROW(qap_objective(k, Assignment::identity(3)), Error);
}

TEST(Qap, MatchesDenseDoubleSum) {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n1 = 1 + t % 6, n2 = 1 + (t / 6) % 6;
    if (n1 * n2 > 36) continue;
    const auto g1 = testgen::random_graph(rng, n1, 0.5);
    const auto g2 = testgen::random_graph(rng, n2, 0.5);
    const auto k = build_affinity_matrix(g1, g2, {});
    std::vector<double> x(n1 * n2, 0.0);
    std::bernoulli_distribution coin(0.4);
    for (double& v : x) v = coin(rng) ? 1.0 : 0.0;
    EXPECT_NEAR(qap_objective(k, x), oracle::dense_qap(k.to_dense(), n1 * n2, x), 1e-12);
  }
}
