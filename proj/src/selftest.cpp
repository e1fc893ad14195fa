#include "tpgm/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>

#include "tpgm/context_sim.hpp"
#include "tpgm/hungarian.hpp"
#include "tpgm/lp.hpp"
#include "tpgm/matcher.hpp"
#include "tpgm/oracles.hpp"

namespace tpgm {

namespace {

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double max_dev(std::span<const double> v, double target) {
  double d = 0.0;
  for (double x : v) d = std::max(d, std::abs(x - target));
  return d;
}

SparseMatrix uniform_triangle() {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) t.push_back({i, j, 0.5});
  return SparseMatrix::from_triplets(3, 3, std::move(t));
}

ProductGraph triangle_pg(std::optional<double> lambda, const SelftestOptions& opts) {
  ProductGraphOptions po;
  po.lambda_rule = opts.lambda_rule;
  return ProductGraph::from_matrices({1.0, 1.0, 1.0}, uniform_triangle(), lambda, po);
}

CheckResult close_to(std::string name, std::span<const double> v, double target, double tol) {
  const double d = max_dev(v, target);
  return {std::move(name), d <= tol, fmt("max |value - %.12g| = %.3g", target, d)};
}

CheckResult eq8_random_walk(const SelftestOptions& o) {
  const auto cs = cs_truncated(triangle_pg(1.0, o), WalkModel::random_walk, 2);
  return close_to("two_step_random_walk", cs.values, 1.0, 1e-12);
}

CheckResult eq8_backtrackless(const SelftestOptions& o) {
  const auto cs = cs_truncated(triangle_pg(1.0, o), WalkModel::backtrackless, 2);
  return close_to("two_step_backtrackless", cs.values, 2.5 / 3.0, 1e-12);
}

CheckResult closed_form_random_walk(const SelftestOptions& o) {
  const auto cs = cs_random_walk(triangle_pg(std::nullopt, o));
  return close_to("triangle_closed_form_random_walk", cs.values, 2.0 / 3.0, 1e-9);
}

CheckResult closed_form_backtrackless(const SelftestOptions& o) {
  const auto cs = cs_backtrackless(triangle_pg(std::nullopt, o));
  return close_to("triangle_closed_form_backtrackless", cs.values, 2.0 / 3.0, 1e-9);
}

CheckResult qx_triangle(const SelftestOptions&) {
  const auto q = compute_qx(uniform_triangle());
  return close_to("qx_triangle", q, -0.5, 1e-15);
}

CheckResult lambda_rule(const SelftestOptions& o) {
  // Pattern: a star 0 -> {1, 2, 3}; target: the 2-cycle. The product graph has
  // maximum out-degree 3 and maximum in-degree 1, so lambda = 1.
  const AttributedGraph star({Vector{0.1}, Vector{0.2}, Vector{0.3}, Vector{0.4}},
                             {{0, 1, {0.5}}, {0, 2, {0.5}}, {0, 3, {0.5}}}, true);
  const AttributedGraph cycle({Vector{0.1}, Vector{0.2}}, {{0, 1, {0.5}}, {1, 0, {0.5}}}, true);
  ProductGraphOptions po;
  po.lambda_rule = o.lambda_rule;
  const auto pg = ProductGraph::build(star, cycle, {}, po);
  // And a product graph where both maxima are 2: lambda = 1/2.
  const auto tri = triangle_pg(std::nullopt, o);
  const bool ok = pg.max_out_degree() == 3 && pg.max_in_degree() == 1 && pg.lambda() == 1.0 && tri.lambda() == 0.5;
  return {"lambda_rule", ok, fmt("lambda = %.6g (star x cycle), %.6g (triangle)", pg.lambda(), tri.lambda())};
}

CheckResult hungarian_brute_force(const SelftestOptions&) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> size(1, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n1 = size(rng), n2 = size(rng);
    std::vector<double> s(n1 * n2);
    for (double& v : s) v = u(rng);
    const auto h = hungarian_max(s, n1, n2);
    const auto b = oracle::best_assignment(s, n1, n2);
    if (h.score != b.score)
      return {"hungarian_brute_force", false, "trial " + std::to_string(trial) + ": " + fmt("%.17g vs %.17g", h.score, b.score)};
  }
  return {"hungarian_brute_force", true, "100 random matrices up to 5x5"};
}

CheckResult lp_vertex_oracle(const SelftestOptions&) {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> size(1, 4);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = size(rng), m = size(rng);
    LinearProgram lp;
    lp.c.resize(n);
    for (double& c : lp.c) c = 2.0 * u(rng) - 0.5;
    std::vector<Triplet> t;
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t j = 0; j < n; ++j)
        if (u(rng) < 0.7) t.push_back({r, j, 2.0 * u(rng) - 0.5});
    lp.a = SparseMatrix::from_triplets(m, n, std::move(t));
    lp.b.resize(m);
    for (double& b : lp.b) b = u(rng);
    const double got = lp_solve(lp).objective;
    const double want = oracle::lp_by_vertices(lp).objective;
    worst = std::max(worst, std::abs(got - want));
  }
  return {"lp_vertex_oracle", worst <= 1e-7, fmt("max objective gap %.3g over %g LPs", worst, 100)};
}

CheckResult self_match(const SelftestOptions& o) {
  const AttributedGraph g({Vector{0.05}, Vector{0.3}, Vector{0.55}, Vector{0.8}},
                          {{0, 1, {0.2}}, {1, 2, {0.4}}, {2, 3, {0.6}}, {3, 0, {0.8}}, {0, 2, {0.1}}}, true);
  MatchConfig cfg;
  cfg.product.lambda_rule = o.lambda_rule;
  for (auto m : {WalkModel::pairwise, WalkModel::random_walk, WalkModel::backtrackless}) {
    cfg.model = m;
    const auto r = match(g, g, cfg);
    if (!r.assignment || !(*r.assignment == Assignment::identity(4)))
      return {"self_match_identity", false, std::string(to_string(m)) + " did not return the identity"};
  }
  return {"self_match_identity", true, "all three models"};
}

}  // namespace

double mutated_lambda_rule(std::size_t max_out_degree, std::size_t max_in_degree) {
  return 1.0 / static_cast<double>(1 + std::max(max_out_degree, max_in_degree));
}

std::vector<CheckResult> run_selftest(const SelftestOptions& opts) {
  using Check = std::pair<const char*, std::function<CheckResult(const SelftestOptions&)>>;
  const Check checks[] = {
      {"two_step_random_walk", eq8_random_walk},
      {"two_step_backtrackless", eq8_backtrackless},
      {"triangle_closed_form_random_walk", closed_form_random_walk},
      {"triangle_closed_form_backtrackless", closed_form_backtrackless},
      {"qx_triangle", qx_triangle},
      {"lambda_rule", lambda_rule},
      {"hungarian_brute_force", hungarian_brute_force},
      {"lp_vertex_oracle", lp_vertex_oracle},
      {"self_match_identity", self_match},
  };
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : checks) {
    try {
      out.push_back(fn(opts));
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  }
  return out;
}

}  // namespace tpgm
