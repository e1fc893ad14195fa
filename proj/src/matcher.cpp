#include "tpgm/matcher.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include "tpgm/error.hpp"
#include "tpgm/hungarian.hpp"

namespace tpgm {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <typename F>
auto run_stage(const char* stage, double& elapsed_ms, F&& f) {
  const auto t0 = Clock::now();
  try {
    auto out = f();
    elapsed_ms = ms_since(t0);
    return out;
  } catch (const Error& e) {
    throw e.with_stage(stage);
  }
}

}  // namespace

std::vector<double> build_sv(const ContextualSimilarity& cs) { return cs.values; }

std::vector<double> build_se(const ContextualSimilarity& cs, const ProductGraph& pg) {
  if (cs.values.size() != pg.size()) fail(ErrorKind::dimension, "build_se: similarity/product graph size mismatch");
  const auto deg = pg.out_degree();
  auto share = [&](std::size_t k) {
    return cs.values[k] / static_cast<double>(std::max<std::size_t>(1, deg[k]));
  };
  std::vector<double> se(pg.edge_count());
  for (std::size_t e = 0; e < se.size(); ++e) se[e] = share(pg.edge_source(e)) + share(pg.edge_target(e));
  return se;
}

MatchingLp build_matching_lp(const ProductGraph& pg, std::span<const double> sv, std::span<const double> se,
                             double prune_eps) {
  const std::size_t vx = pg.size();
  const std::size_t ex = pg.edge_count();
  if (sv.size() != vx || se.size() != ex)
    fail(ErrorKind::dimension, "build_matching_lp: S_V/S_E sizes do not match the product graph");
  if (ex > 0 && pg.edge_arc1().size() != ex)
    fail(ErrorKind::invalid_argument, "build_matching_lp needs a product graph built from two graphs");

  const std::size_t n1 = pg.n1();
  const std::size_t n2 = pg.n2();
  const std::size_t e1 = pg.arc_count1();
  const std::size_t e2 = pg.arc_count2();

  MatchingLp out;
  std::vector<std::size_t> x_var(vx, static_cast<std::size_t>(-1));
  for (std::size_t k = 0; k < vx; ++k) {
    if (prune_eps > 0.0 && sv[k] < prune_eps) continue;
    x_var[k] = out.x_nodes.size();
    out.x_nodes.push_back(k);
  }
  const std::size_t nx = out.x_nodes.size();
  for (std::size_t e = 0; e < ex; ++e) {
    if (x_var[pg.edge_source(e)] == static_cast<std::size_t>(-1) ||
        x_var[pg.edge_target(e)] == static_cast<std::size_t>(-1))
      continue;
    out.y_edges.push_back(e);
  }
  const std::size_t ny = out.y_edges.size();

  const std::size_t pattern_node = 0;
  const std::size_t pattern_edge = pattern_node + n1;
  const std::size_t target_node = pattern_edge + e1;
  const std::size_t target_edge = target_node + n2;
  const std::size_t outward = target_edge + e2;
  const std::size_t inward = outward + vx;
  const std::size_t rows = inward + vx;

  std::vector<Triplet> t;
  t.reserve(4 * nx + 4 * ny);
  const auto out1 = pg.g1_out_degree();
  const auto out2 = pg.g2_out_degree();
  const auto in1 = pg.g1_in_degree();
  const auto in2 = pg.g2_in_degree();
  for (std::size_t v = 0; v < nx; ++v) {
    const std::size_t k = out.x_nodes[v];
    const auto [i, j] = pg.pair_of(k);
    t.push_back({pattern_node + i, v, 1.0});
    t.push_back({target_node + j, v, 1.0});
    const auto out_cap = static_cast<double>(std::min(out1[i], out2[j]));
    const auto in_cap = static_cast<double>(std::min(in1[i], in2[j]));
    if (out_cap > 0.0) t.push_back({outward + k, v, -out_cap});
    if (in_cap > 0.0) t.push_back({inward + k, v, -in_cap});
  }
  const auto arc1 = pg.edge_arc1();
  const auto arc2 = pg.edge_arc2();
  for (std::size_t v = 0; v < ny; ++v) {
    const std::size_t e = out.y_edges[v];
    const std::size_t col = nx + v;
    t.push_back({pattern_edge + arc1[e], col, 1.0});
    t.push_back({target_edge + arc2[e], col, 1.0});
    t.push_back({outward + pg.edge_source(e), col, 1.0});
    t.push_back({inward + pg.edge_target(e), col, 1.0});
  }

  out.lp.a = SparseMatrix::from_triplets(rows, nx + ny, std::move(t));
  out.lp.b.assign(rows, 0.0);
  std::fill(out.lp.b.begin(), out.lp.b.begin() + static_cast<std::ptrdiff_t>(outward), 1.0);
  out.lp.c.resize(nx + ny);
  for (std::size_t v = 0; v < nx; ++v) out.lp.c[v] = sv[out.x_nodes[v]];
  for (std::size_t v = 0; v < ny; ++v) out.lp.c[nx + v] = se[out.y_edges[v]];
  return out;
}

MatchResult match(const AttributedGraph& g1, const AttributedGraph& g2, const MatchConfig& cfg) {
  const auto t0 = Clock::now();
  MatchResult res;
  auto& tm = res.timings;

  const auto pg = run_stage("product_graph", tm.product_graph_ms,
                            [&] { return ProductGraph::build(g1, g2, cfg.affinity, cfg.product); });
  const auto cs = run_stage("context_similarity", tm.context_ms,
                            [&] { return contextual_similarity(pg, cfg.model, cfg.solver); });
  const auto mlp = run_stage("lp_build", tm.lp_build_ms, [&] {
    const auto sv = build_sv(cs);
    const auto se = build_se(cs, pg);
    return build_matching_lp(pg, sv, se, cfg.prune_eps);
  });
  const auto sol = run_stage("lp_solve", tm.lp_solve_ms, [&] {
    auto s = lp_solve(mlp.lp, cfg.lp);
    if (s.status != LpStatus::optimal)
      fail(ErrorKind::solver, "LP pivot budget exhausted after " + std::to_string(s.pivots) + " pivots");
    return s;
  });

  res.x.assign(pg.size(), 0.0);
  res.y.assign(pg.edge_count(), 0.0);
  for (std::size_t v = 0; v < mlp.x_count(); ++v) res.x[mlp.x_nodes[v]] = sol.z[v];
  for (std::size_t v = 0; v < mlp.y_count(); ++v) res.y[mlp.y_edges[v]] = sol.z[mlp.x_count() + v];
  res.objective_lp = sol.objective;
  res.lp_pivots = sol.pivots;

  if (cfg.discretize) {
    run_stage("discretize", tm.discretize_ms, [&] {
      // Exact ties in x (common at fractional vertices) are broken by the
      // contextual similarity rather than by node order, so relabeling a graph
      // relabels the assignment.
      const double cs_max = cs.values.empty() ? 0.0 : *std::max_element(cs.values.begin(), cs.values.end());
      std::vector<double> scores(res.x);
      if (cs_max > 0.0)
        for (std::size_t k = 0; k < scores.size(); ++k) scores[k] += 1e-9 * cs.values[k] / cs_max;
      auto h = hungarian_max(scores, pg.n1(), pg.n2());
      const auto k = build_affinity_matrix(g1, g2, cfg.affinity);
      res.objective_qap = qap_objective(k, h.assignment);
      res.assignment = std::move(h.assignment);
      return 0;
    });
  }
  tm.total_ms = ms_since(t0);
  return res;
}

}  // namespace tpgm
