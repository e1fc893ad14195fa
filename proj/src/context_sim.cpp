#include "tpgm/context_sim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "tpgm/error.hpp"
#include "tpgm/krylov.hpp"

namespace tpgm {

namespace {

// Solves (I - lambda W + q_scale * diag(Q)) x = 1. q_scale is 0 for random
// walks and lambda^2 for backtrackless walks.
std::vector<double> solve_walk_system(const ProductGraph& pg, double q_scale, const SolverOptions& opts,
                                      SolverStats& stats) {
  const std::size_t n = pg.size();
  const double lambda = pg.lambda();
  const auto& w = pg.w();
  const auto q = pg.qx();
  const std::vector<double> ones(n, 1.0);
  const double tol = opts.rtol * std::sqrt(static_cast<double>(n));

  auto apply = [&](std::span<const double> x, std::span<double> y) {
    spmv(w, x, y);
    for (std::size_t k = 0; k < n; ++k) y[k] = x[k] - lambda * y[k] + q_scale * q[k] * x[k];
  };

  std::vector<double> x;
  if (n < opts.dense_threshold) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
      a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) += q_scale * q[k];
      const auto cols = w.row_cols(k);
      const auto vals = w.row_values(k);
      for (std::size_t p = 0; p < cols.size(); ++p)
        a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(cols[p])) -= lambda * vals[p];
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::VectorXd sol = lu.solve(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)));
    x.assign(sol.data(), sol.data() + n);
    stats.dense = true;
    stats.iterations = 1;
    if (lu.rcond() < 1e-14) {
      std::ostringstream msg;
      msg << "walk system is singular (reciprocal condition " << lu.rcond() << ", lambda " << lambda << ")";
      fail(ErrorKind::solver, msg.str());
    }
  } else {
    const auto max_iter = static_cast<std::size_t>(
        std::max(1.0, std::ceil(opts.max_iter_factor * static_cast<double>(n))));
    auto res = gmres(apply, ones, opts.rtol, max_iter);
    x = std::move(res.x);
    stats.dense = false;
    stats.iterations = res.iterations;
  }

  std::vector<double> ax(n);
  apply(x, ax);
  double r2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) r2 += (ax[k] - 1.0) * (ax[k] - 1.0);
  stats.residual = std::sqrt(r2);
  if (!std::isfinite(stats.residual) || stats.residual > tol) {
    std::ostringstream msg;
    msg << "walk system did not converge: residual " << stats.residual << " after " << stats.iterations
        << " iterations (target " << tol << ", lambda " << lambda << ")";
    fail(ErrorKind::solver, msg.str());
  }
  return x;
}

// At lambda = 1 the backtrackless closed form is 0 * inf, so sum the series
// sum_k W_k 1 directly. It converges only when long backtrackless walks die
// out, which is the case for the edgeless and acyclic product graphs where a
// unit discount arises.
std::vector<double> backtrackless_unit_series(const ProductGraph& pg, const SolverOptions& opts,
                                              SolverStats& stats) {
  const std::size_t n = pg.size();
  const auto& w = pg.w();
  const auto q = pg.qx();
  const auto max_terms = static_cast<std::size_t>(
      std::max(2.0, std::ceil(opts.max_iter_factor * static_cast<double>(n))));
  std::vector<double> acc(n, 1.0), prev2(n, 1.0), prev1 = spmv(w, prev2), next(n);
  for (std::size_t k = 0; k < n; ++k) acc[k] += prev1[k];
  auto inf_norm = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  for (std::size_t term = 2; term <= max_terms; ++term) {
    spmv(w, prev1, next);
    const double shift = term == 2 ? 1.0 : 0.0;
    for (std::size_t k = 0; k < n; ++k) next[k] -= (q[k] + shift) * prev2[k];
    for (std::size_t k = 0; k < n; ++k) acc[k] += next[k];
    // Two negligible terms in a row end the recurrence.
    const double tol = opts.rtol * inf_norm(acc);
    if (inf_norm(prev1) <= tol && inf_norm(next) <= tol) {
      stats.iterations = term;
      stats.residual = inf_norm(next);
      return acc;
    }
    std::swap(prev2, prev1);
    std::swap(prev1, next);
  }
  std::ostringstream msg;
  msg << "backtrackless series at lambda 1 does not converge within " << max_terms << " terms";
  fail(ErrorKind::solver, msg.str());
}

void clamp_negative(std::vector<double>& v) {
  for (double& x : v)
    if (x < 0.0) x = 0.0;
}

}  // namespace

std::string_view to_string(WalkModel m) {
  switch (m) {
    case WalkModel::pairwise: return "pairwise";
    case WalkModel::random_walk: return "random_walk";
    case WalkModel::backtrackless: return "backtrackless";
  }
  return "?";
}

WalkModel parse_walk_model(std::string_view name) {
  if (name == "pairwise" || name == "PG-N") return WalkModel::pairwise;
  if (name == "random_walk" || name == "PG-R") return WalkModel::random_walk;
  if (name == "backtrackless" || name == "PG-B") return WalkModel::backtrackless;
  fail(ErrorKind::parse, "unknown walk model '" + std::string(name) + "'");
}

ContextualSimilarity cs_pairwise(const ProductGraph& pg) {
  ContextualSimilarity cs;
  cs.values.assign(pg.p().begin(), pg.p().end());
  cs.model = WalkModel::pairwise;
  return cs;
}

ContextualSimilarity cs_random_walk(const ProductGraph& pg, const SolverOptions& opts) {
  ContextualSimilarity cs;
  cs.model = WalkModel::random_walk;
  cs.values = solve_walk_system(pg, 0.0, opts, cs.stats);
  const auto p = pg.p();
  for (std::size_t k = 0; k < cs.values.size(); ++k) cs.values[k] *= p[k];
  clamp_negative(cs.values);
  return cs;
}

ContextualSimilarity cs_backtrackless(const ProductGraph& pg, const SolverOptions& opts) {
  ContextualSimilarity cs;
  cs.model = WalkModel::backtrackless;
  const double l2 = pg.lambda() * pg.lambda();
  const auto p = pg.p();
  if (pg.lambda() == 1.0) {
    cs.values = backtrackless_unit_series(pg, opts, cs.stats);
    for (std::size_t k = 0; k < cs.values.size(); ++k) cs.values[k] *= p[k];
    clamp_negative(cs.values);
    return cs;
  }
  cs.values = solve_walk_system(pg, l2, opts, cs.stats);
  for (std::size_t k = 0; k < cs.values.size(); ++k) cs.values[k] *= (1.0 - l2) * p[k];
  clamp_negative(cs.values);
  return cs;
}

ContextualSimilarity cs_truncated(const ProductGraph& pg, WalkModel model, std::size_t n_terms) {
  const std::size_t n = pg.size();
  const double lambda = pg.lambda();
  const auto& w = pg.w();
  const auto q = pg.qx();

  std::vector<double> acc(n, 1.0);
  if (model != WalkModel::pairwise && n_terms >= 1) {
    // v_k = W_k 1. The backtrackless matrices also satisfy the left-hand
    // recurrence W_k = W W_{k-1} - Q W_{k-2} (both generate the coefficients of
    // (1 - t^2)(I - tW + t^2 Q)^-1), which turns the matrix recurrence into a
    // vector one.
    std::vector<double> prev2(n, 1.0);  // v_{k-2}
    std::vector<double> prev1 = spmv(w, prev2);  // v_{k-1}
    double scale = lambda;
    for (std::size_t k = 0; k < n; ++k) acc[k] += scale * prev1[k];
    std::vector<double> next(n);
    for (std::size_t term = 2; term <= n_terms; ++term) {
      spmv(w, prev1, next);
      if (model == WalkModel::backtrackless) {
        const double shift = term == 2 ? 1.0 : 0.0;
        for (std::size_t k = 0; k < n; ++k) next[k] -= (q[k] + shift) * prev2[k];
      }
      scale *= lambda;
      for (std::size_t k = 0; k < n; ++k) acc[k] += scale * next[k];
      std::swap(prev2, prev1);
      std::swap(prev1, next);
    }
  }

  ContextualSimilarity cs;
  cs.model = model;
  cs.values = std::move(acc);
  const auto p = pg.p();
  for (std::size_t k = 0; k < n; ++k) cs.values[k] *= p[k];
  cs.stats.iterations = n_terms;
  return cs;
}

ContextualSimilarity contextual_similarity(const ProductGraph& pg, WalkModel model, const SolverOptions& opts) {
  switch (model) {
    case WalkModel::pairwise: return cs_pairwise(pg);
    case WalkModel::random_walk: return cs_random_walk(pg, opts);
    case WalkModel::backtrackless: return cs_backtrackless(pg, opts);
  }
  fail(ErrorKind::internal, "unknown walk model");
}

}  // namespace tpgm
