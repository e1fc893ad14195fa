#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "random_graphs.hpp"
#include "tpgm/affinity.hpp"
#include "tpgm/bench.hpp"
#include "tpgm/error.hpp"
#include "tpgm/hungarian.hpp"
#include "tpgm/matcher.hpp"
#include "tpgm/oracles.hpp"

using namespace tpgm;

namespace {

const WalkModel kModels[] = {WalkModel::pairwise, WalkModel::random_walk, WalkModel::backtrackless};

MatchConfig with_model(WalkModel m) {
  MatchConfig c;
  c.model = m;
  return c;
}

// All injections of g1 into g2 by brute force; returns the best QAP score and
// how many injections reach it (within 1e-12).
std::pair<double, int> qap_brute_force(const AttributedGraph& g1, const AttributedGraph& g2,
                                       Assignment* best = nullptr) {
  const auto k = build_affinity_matrix(g1, g2, {});
  const std::size_t n1 = g1.node_count(), n2 = g2.node_count();
  std::vector<std::size_t> cols(n2);
  std::iota(cols.begin(), cols.end(), 0);
  double top = -1.0;
  int ties = 0;
  std::vector<std::vector<std::size_t>> seen;
  do {
    std::vector<std::size_t> head(cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(n1));
    if (std::find(seen.begin(), seen.end(), head) != seen.end()) continue;
    seen.push_back(head);
    Assignment a(n1, n2);
    for (std::size_t i = 0; i < n1; ++i) a.set(i, head[i]);
    const double s = qap_objective(k, a);
    if (s > top + 1e-12) {
      top = s;
      ties = 1;
      if (best) *best = a;
    } else if (std::abs(s - top) <= 1e-12) {
      ++ties;
    }
  } while (std::next_permutation(cols.begin(), cols.end()));
  return {top, ties};
}

AttributedGraph permute_nodes(const AttributedGraph& g, const std::vector<std::size_t>& p) {
  std::vector<NodeAttr> nodes(g.node_count());
  for (std::size_t v = 0; v < g.node_count(); ++v) nodes[p[v]] = g.node(v);
  std::vector<Arc> arcs;
  for (const auto& a : g.arcs()) arcs.push_back({p[a.src], p[a.dst], a.attr});
  return AttributedGraph(std::move(nodes), std::move(arcs), g.directed());
}

}  // namespace

TEST(BuildSv, CopiesValues) {
  ContextualSimilarity cs;
  cs.values = {0.2, 0.8};
  EXPECT_EQ(build_sv(cs), (std::vector<double>{0.2, 0.8}));
  const auto pg = ProductGraph::from_matrices({1, 3}, SparseMatrix(2, 2));
  EXPECT_EQ(build_sv(cs_pairwise(pg)), (std::vector<double>{0.25, 0.75}));
  const auto tri = ProductGraph::from_matrices(
      {1, 1, 1}, SparseMatrix::from_triplets(3, 3, {{0, 1, .5}, {0, 2, .5}, {1, 0, .5}, {1, 2, .5}, {2, 0, .5}, {2, 1, .5}}));
  for (double v : build_sv(cs_random_walk(tri))) EXPECT_NEAR(v, 2.0 / 3.0, 1e-12);
}

TEST(BuildSe, SingleEdgeWithFloor) {
  const auto pg = ProductGraph::from_matrices({1, 1}, SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}}));
  ContextualSimilarity cs;
  cs.values = {0.4, 0.6};
  const auto se = build_se(cs, pg);
  ASSERT_EQ(se.size(), 1u);
  EXPECT_DOUBLE_EQ(se[0], 1.0);
}

TEST(BuildSe, ZeroAndUniform) {
  const auto tri = ProductGraph::from_matrices(
      {1, 1, 1}, SparseMatrix::from_triplets(3, 3, {{0, 1, .5}, {0, 2, .5}, {1, 0, .5}, {1, 2, .5}, {2, 0, .5}, {2, 1, .5}}));
  ContextualSimilarity zero;
  zero.values = {0, 0, 0};
  for (double v : build_se(zero, tri)) EXPECT_EQ(v, 0.0);
  ContextualSimilarity uni;
  uni.values = {0.3, 0.3, 0.3};
  for (double v : build_se(uni, tri)) EXPECT_DOUBLE_EQ(v, 2 * 0.3 / 2);
}

TEST(MatchingLp, SingleNodes) {
  const AttributedGraph g({Vector{0.1}}, {}, true);
  const auto pg = ProductGraph::build(g, g, {});
  const auto cs = cs_pairwise(pg);
  const auto m = build_matching_lp(pg, build_sv(cs), build_se(cs, pg));
  EXPECT_EQ(m.lp.nvars(), 1u);
  // Pattern node, target node, and the (empty) outward and inward rows.
  ASSERT_EQ(m.lp.nrows(), 4u);
  EXPECT_EQ(m.lp.a.row_cols(0).size(), 1u);
  EXPECT_EQ(m.lp.a.row_cols(1).size(), 1u);
  EXPECT_EQ(m.lp.a.row_cols(2).size(), 0u);
  EXPECT_EQ(m.lp.a.row_cols(3).size(), 0u);
  EXPECT_NEAR(lp_solve(m.lp).z[0], 1.0, 1e-12);
}

TEST(MatchingLp, PathVersusPath) {
  const AttributedGraph g({Vector{0.0}, Vector{0.0}}, {{0, 1, {0.5}}}, true);
  const auto pg = ProductGraph::build(g, g, {});
  const auto cs = cs_random_walk(pg);
  const auto m = build_matching_lp(pg, build_sv(cs), build_se(cs, pg));
  ASSERT_EQ(m.lp.nvars(), 5u);
  EXPECT_EQ(m.lp.nrows(), 2u + 1u + 2u + 1u + 4u + 4u);
  const auto s = lp_solve(m.lp);
  const auto v = oracle::lp_by_vertices(m.lp);
  EXPECT_NEAR(s.objective, v.objective, 1e-9);
  EXPECT_NEAR(s.z[0], 1.0, 1e-9);
  EXPECT_NEAR(s.z[3], 1.0, 1e-9);
  EXPECT_NEAR(s.z[4], 1.0, 1e-9);
}

TEST(MatchingLp, CouplingRowCoefficients) {
  // g1: 0 -> 1 -> 2 and 0 -> 2; g2: 0 -> 1.
  const AttributedGraph g1({Vector{0.1}, Vector{0.2}, Vector{0.3}}, {{0, 1, {0.1}}, {1, 2, {0.1}}, {0, 2, {0.1}}}, true);
  const AttributedGraph g2({Vector{0.1}, Vector{0.2}}, {{0, 1, {0.1}}}, true);
  const auto pg = ProductGraph::build(g1, g2, {});
  std::vector<double> sv(pg.size(), 0.0), se(pg.edge_count(), 1.0);
  const auto m = build_matching_lp(pg, sv, se);
  const std::size_t n1 = 3, n2 = 2, e1 = 3, e2 = 1, vx = 6;
  const std::size_t outward = n1 + e1 + n2 + e2, inward = outward + vx;
  const auto dense = m.lp.a.to_dense();
  const std::size_t cols = m.lp.nvars();
  for (std::size_t k = 0; k < vx; ++k) {
    const auto [i, j] = pg.pair_of(k);
    const double out_cap = std::min(out_degree(g1, i), out_degree(g2, j));
    const double in_cap = std::min(in_degree(g1, i), in_degree(g2, j));
    EXPECT_EQ(dense[(outward + k) * cols + k], -out_cap);
    EXPECT_EQ(dense[(inward + k) * cols + k], -in_cap);
    for (std::size_t e = 0; e < pg.edge_count(); ++e) {
      EXPECT_EQ(dense[(outward + k) * cols + vx + e], pg.edge_source(e) == k ? 1.0 : 0.0);
      EXPECT_EQ(dense[(inward + k) * cols + vx + e], pg.edge_target(e) == k ? 1.0 : 0.0);
    }
  }
  for (std::size_t r = 0; r < outward; ++r) EXPECT_EQ(m.lp.b[r], 1.0);
  for (std::size_t r = outward; r < m.lp.nrows(); ++r) EXPECT_EQ(m.lp.b[r], 0.0);
  // With S_V = 0 the LP still raises x to carry edge gain through the coupling rows.
  const auto s = lp_solve(m.lp);
  EXPECT_GT(s.objective, 0.0);
  EXPECT_LE(oracle::matching_violation(g1, g2, std::span(s.z).first(vx), std::span(s.z).subspan(vx)), 1e-9);
}

TEST(Match, SelfMatchIsIdentity) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const auto g = testgen::random_graph(rng, 6, 0.5);
    for (auto m : kModels) {
      const auto r = match(g, g, with_model(m));
      ASSERT_TRUE(r.assignment);
      EXPECT_EQ(*r.assignment, Assignment::identity(6)) << to_string(m) << " trial " << t;
    }
  }
}

TEST(Match, PatternInsideLargerTarget) {
  const AttributedGraph g1({Vector{0.2}, Vector{0.7}}, {{0, 1, {0.5}}}, true);
  const AttributedGraph g2({Vector{0.7}, Vector{3.0}, Vector{0.2}, Vector{4.0}},
                           {{2, 0, {0.5}}, {1, 3, {0.9}}, {3, 0, {0.1}}, {0, 1, {0.3}}}, true);
  Assignment best;
  const auto [score, ties] = qap_brute_force(g1, g2, &best);
  ASSERT_EQ(ties, 1);
  EXPECT_TRUE(best.contains(0, 2));
  EXPECT_TRUE(best.contains(1, 0));
  for (auto m : {WalkModel::pairwise, WalkModel::random_walk})
    EXPECT_EQ(*match(g1, g2, with_model(m)).assignment, best) << to_string(m);
  // The single pattern arc makes lambda = 1 on an acyclic product graph with no
  // 2-cycles, where the backtrackless system is singular.
  try {
    match(g1, g2, with_model(WalkModel::backtrackless));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::solver);
    EXPECT_EQ(e.stage(), "context_similarity");
  }
}

TEST(Match, NoPatternEdgesReducesToNodeAffinities) {
  std::mt19937_64 rng(2);
  const auto g1 = testgen::random_graph(rng, 4, 0.0);
  const auto g2 = testgen::random_graph(rng, 6, 0.5);
  const auto pg = ProductGraph::build(g1, g2, {});
  const auto expected = hungarian_max(pg.p(), 4, 6).assignment;
  for (auto m : kModels) {
    const auto r = match(g1, g2, with_model(m));
    EXPECT_TRUE(r.y.empty());
    EXPECT_EQ(*r.assignment, expected);
  }
}

TEST(Match, SolutionsSatisfyConstraints) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> size(1, 7);
  for (int t = 0; t < 60; ++t) {
    const auto g1 = testgen::random_graph(rng, size(rng), 0.5, t % 3 != 0);
    const auto g2 = testgen::random_graph(rng, size(rng), 0.5, t % 3 != 0);
    for (auto m : kModels) {
      MatchResult r;
      try {
        r = match(g1, g2, with_model(m));
      } catch (const Error& e) {
        // A unit discount on a cyclic product graph has no finite walk sum.
        ASSERT_EQ(e.stage(), "context_similarity") << e.what();
        continue;
      }
      EXPECT_LE(oracle::matching_violation(g1, g2, r.x, r.y), 1e-7);
      ASSERT_TRUE(r.assignment);
      EXPECT_EQ(r.assignment->size(), std::min(g1.node_count(), g2.node_count()));
      EXPECT_NEAR(*r.objective_qap, qap_objective(build_affinity_matrix(g1, g2, {}), *r.assignment), 1e-12);
    }
  }
}

TEST(Match, TargetRelabelingInvariant) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    const auto g1 = testgen::random_graph(rng, 5, 0.5);
    const auto g2 = testgen::random_graph(rng, 6, 0.5);
    std::vector<std::size_t> perm(6);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto h2 = permute_nodes(g2, perm);
    for (auto m : kModels) {
      const auto a = match(g1, g2, with_model(m));
      const auto b = match(g1, h2, with_model(m));
      // The LP optimum value is label-free; the optimal vertex need not be
      // unique, so the rounded assignment may differ.
      EXPECT_NEAR(a.objective_lp, b.objective_lp, 1e-9) << to_string(m) << " t" << t;
    }
  }
}

TEST(Match, SyntheticRelabelingGivesSamePairs) {
  SyntheticConfig c;
  c.n_inlier = 6;
  c.n_outlier = 2;
  c.sigma = 0.05;
  c.rho = 0.7;
  c.seed = 12;
  std::mt19937_64 rng(13);
  int unequal = 0;
  for (std::size_t t = 0; t < 20; ++t) {
    const auto pair = gen_synthetic_pair(c, t);
    std::vector<std::size_t> perm(pair.g2.node_count());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto h2 = permute_nodes(pair.g2, perm);
    for (auto m : kModels) {
      const auto a = match(pair.g1, pair.g2, with_model(m));
      const auto b = match(pair.g1, h2, with_model(m));
      bool same = true;
      for (const auto& [i, j] : a.assignment->pairs()) same = same && b.assignment->contains(i, perm[j]);
      unequal += !same;
      EXPECT_TRUE(same) << to_string(m) << " trial " << t;
    }
  }
  EXPECT_EQ(unequal, 0);
}

TEST(Match, IntegralLpKeepsSupport) {
  std::mt19937_64 rng(5);
  int integral = 0;
  for (int t = 0; t < 40; ++t) {
    const auto g1 = testgen::random_graph(rng, 4, 0.6);
    const auto g2 = testgen::random_graph(rng, 5, 0.6);
    for (auto m : kModels) {
      const auto r = match(g1, g2, with_model(m));
      double frac = 0.0;
      for (double v : r.x) frac = std::max(frac, std::min(v, 1.0 - v));
      if (frac >= 1e-6) continue;
      ++integral;
      for (std::size_t k = 0; k < r.x.size(); ++k)
        if (r.x[k] > 0.5) {
          EXPECT_TRUE(r.assignment->contains(k / 5, k % 5));
        }
    }
  }
  EXPECT_GT(integral, 0);
}

TEST(Match, FarOutlierDuplicateChangesNothing) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int t = 0; t < 30; ++t) {
    // Pattern of 3 nodes; target = shuffled copy plus one far outlier.
    const auto g1 = testgen::random_graph(rng, 3, 0.7);
    std::vector<NodeAttr> nodes(g1.nodes());
    nodes.push_back(Vector{5.0 + u(rng)});
    std::vector<Arc> arcs(g1.arcs());
    arcs.push_back({3, 0, {u(rng)}});
    arcs.push_back({1, 3, {u(rng)}});
    const AttributedGraph g2(nodes, arcs, true);
    // Duplicate the outlier along with its arcs.
    nodes.push_back(nodes[3]);
    arcs.push_back({4, 0, arcs[arcs.size() - 2].attr});
    arcs.push_back({1, 4, arcs[arcs.size() - 2].attr});
    const AttributedGraph g3(nodes, arcs, true);
    if (qap_brute_force(g1, g2).second != 1 || qap_brute_force(g1, g3).second != 1) continue;
    ++checked;
    for (auto m : kModels) {
      const auto a = match(g1, g2, with_model(m));
      const auto b = match(g1, g3, with_model(m));
      EXPECT_EQ(a.assignment->pairs(), b.assignment->pairs()) << to_string(m) << " trial " << t;
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(Match, NoDiscretize) {
  std::mt19937_64 rng(7);
  const auto g = testgen::random_graph(rng, 4, 0.5);
  MatchConfig c;
  c.discretize = false;
  const auto r = match(g, g, c);
  EXPECT_FALSE(r.assignment);
  EXPECT_FALSE(r.objective_qap);
  EXPECT_EQ(r.x.size(), 16u);
}

TEST(Match, PruneEpsDropsVariables) {
  std::mt19937_64 rng(8);
  const auto g1 = testgen::random_graph(rng, 5, 0.5);
  const auto g2 = testgen::random_graph(rng, 5, 0.5);
  const auto pg = ProductGraph::build(g1, g2, {});
  const auto cs = cs_pairwise(pg);
  const double eps = *std::max_element(cs.values.begin(), cs.values.end()) * 0.5;
  const auto pruned = build_matching_lp(pg, build_sv(cs), build_se(cs, pg), eps);
  EXPECT_LT(pruned.x_count(), pg.size());
  for (auto k : pruned.x_nodes) EXPECT_GE(cs.values[k], eps);
  MatchConfig c;
  c.model = WalkModel::pairwise;
  c.prune_eps = eps;
  const auto r = match(g1, g2, c);
  for (std::size_t k = 0; k < pg.size(); ++k)
    if (cs.values[k] < eps) {
      EXPECT_EQ(r.x[k], 0.0);
    }
  EXPECT_LE(oracle::matching_violation(g1, g2, r.x, r.y), 1e-7);
}

TEST(Match, ErrorsCarryStage) {
  std::mt19937_64 rng(9);
  const auto g = testgen::random_graph(rng, 8, 0.6);
  MatchConfig c;
  c.product.max_tpg_nodes = 10;
  try {
    match(g, g, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::size_cap);
    EXPECT_EQ(e.stage(), "product_graph");
  }
  c = MatchConfig{};
  c.lp.max_pivots = 1;
  try {
    match(g, g, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::solver);
    EXPECT_EQ(e.stage(), "lp_solve");
  }
}
