#include "tpgm/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <utility>

#include "tpgm/error.hpp"

namespace tpgm::oracle {

BruteAssignment best_assignment(std::span<const double> scores, std::size_t n1, std::size_t n2) {
  if (scores.size() != n1 * n2) fail(ErrorKind::dimension, "best_assignment: score matrix size mismatch");
  const std::size_t want = std::min(n1, n2);
  std::vector<std::size_t> col_of(n1, n2);  // n2 = unmatched
  std::vector<bool> used(n2, false);
  BruteAssignment best{Assignment(n1, n2), -std::numeric_limits<double>::infinity()};
  std::vector<std::size_t> best_cols;

  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t row, std::size_t matched) {
    if (matched + (n1 - row) < want) return;
    if (row == n1) {
      double s = 0.0;
      for (std::size_t i = 0; i < n1; ++i)
        if (col_of[i] < n2) s += scores[i * n2 + col_of[i]];
      if (s > best.score) {
        best.score = s;
        best_cols = col_of;
      }
      return;
    }
    for (std::size_t j = 0; j < n2; ++j) {
      if (used[j]) continue;
      used[j] = true;
      col_of[row] = j;
      rec(row + 1, matched + 1);
      used[j] = false;
    }
    col_of[row] = n2;
    rec(row + 1, matched);
  };
  rec(0, 0);

  if (want == 0) best.score = 0.0;
  for (std::size_t i = 0; i < best_cols.size(); ++i)
    if (best_cols[i] < n2) best.assignment.set(i, best_cols[i]);
  return best;
}

VertexOptimum lp_by_vertices(const LinearProgram& lp, double tol) {
  const std::size_t n = lp.nvars();
  const std::size_t m = lp.nrows();
  // Constraint rows g z <= h: the m rows of A, then z_j <= 1, then -z_j <= 0.
  const std::size_t total = m + 2 * n;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(n));
  Eigen::VectorXd h(static_cast<Eigen::Index>(total));
  const auto dense = lp.a.to_dense();
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) g(r, j) = dense[r * n + j];
    h(r) = lp.b[r];
  }
  for (std::size_t j = 0; j < n; ++j) {
    g(m + j, j) = 1.0;
    h(m + j) = 1.0;
    g(m + n + j, j) = -1.0;
    h(m + n + j) = 0.0;
  }

  VertexOptimum best;
  best.objective = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == n) {
      Eigen::MatrixXd sub(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
      for (std::size_t r = 0; r < n; ++r) {
        sub.row(r) = g.row(pick[r]);
        rhs(r) = h(pick[r]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
      if (lu.rank() < static_cast<Eigen::Index>(n)) return;
      const Eigen::VectorXd z = lu.solve(rhs);
      if (((g * z) - h).maxCoeff() > tol) return;
      ++best.vertices;
      double obj = 0.0;
      for (std::size_t j = 0; j < n; ++j) obj += lp.c[j] * z(j);
      if (obj > best.objective) {
        best.objective = obj;
        best.z.assign(z.data(), z.data() + n);
      }
      return;
    }
    for (std::size_t r = start; r + (n - depth) <= total; ++r) {
      pick[depth] = r;
      rec(r + 1, depth + 1);
    }
  };
  if (n == 0) {
    best.objective = 0.0;
    best.vertices = 1;
    return best;
  }
  rec(0, 0);
  return best;
}

std::vector<std::vector<std::int64_t>> backtrackless_walk_counts(std::span<const int> adjacency, std::size_t n,
                                                                 std::size_t k_max) {
  if (adjacency.size() != n * n) fail(ErrorKind::dimension, "backtrackless_walk_counts: adjacency size mismatch");
  std::vector<std::vector<std::int64_t>> counts(k_max + 1, std::vector<std::int64_t>(n * n, 0));
  const std::size_t none = n;
  std::function<void(std::size_t, std::size_t, std::size_t, std::size_t)> walk =
      [&](std::size_t start, std::size_t prev, std::size_t cur, std::size_t len) {
        ++counts[len][start * n + cur];
        if (len == k_max) return;
        for (std::size_t next = 0; next < n; ++next) {
          if (!adjacency[cur * n + next] || next == prev) continue;
          walk(start, cur, next, len + 1);
        }
      };
  for (std::size_t s = 0; s < n; ++s) walk(s, none, s, 0);
  return counts;
}

std::vector<double> dense_cs(const ProductGraph& pg, WalkModel model) {
  const auto dim = static_cast<Eigen::Index>(pg.size());
  if (model == WalkModel::pairwise) return {pg.p().begin(), pg.p().end()};
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dim, dim);
  const auto& sw = pg.w();
  for (std::size_t r = 0; r < sw.rows(); ++r) {
    const auto cols = sw.row_cols(r);
    const auto vals = sw.row_values(r);
    for (std::size_t t = 0; t < cols.size(); ++t) w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols[t])) = vals[t];
  }
  const double lam = pg.lambda();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(dim, dim) - lam * w;
  double scale = 1.0;
  if (model == WalkModel::backtrackless) {
    const Eigen::MatrixXd w2 = w * w;
    for (Eigen::Index k = 0; k < dim; ++k) a(k, k) += lam * lam * (w2(k, k) - 1.0);
    scale = 1.0 - lam * lam;
  }
  const Eigen::VectorXd x = a.partialPivLu().solve(Eigen::VectorXd::Ones(dim));
  std::vector<double> out(pg.size());
  for (Eigen::Index k = 0; k < dim; ++k) out[k] = pg.p()[k] * scale * x(k);
  return out;
}

double dense_qap(const std::vector<double>& k_dense, std::size_t dim, std::span<const double> x) {
  if (k_dense.size() != dim * dim || x.size() != dim) fail(ErrorKind::dimension, "dense_qap: size mismatch");
  double s = 0.0;
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b < dim; ++b) s += x[a] * k_dense[a * dim + b] * x[b];
  return s;
}

double matching_violation(const AttributedGraph& g1, const AttributedGraph& g2, std::span<const double> x,
                          std::span<const double> y) {
  const std::size_t n1 = g1.node_count();
  const std::size_t n2 = g2.node_count();
  if (x.size() != n1 * n2) fail(ErrorKind::dimension, "matching_violation: x has the wrong length");

  struct Edge {
    std::size_t from, to, arc1, arc2;
  };
  std::vector<Edge> edges;
  for (std::size_t a1 = 0; a1 < g1.arc_count(); ++a1)
    for (std::size_t a2 = 0; a2 < g2.arc_count(); ++a2) {
      const auto& u = g1.arc(a1);
      const auto& v = g2.arc(a2);
      edges.push_back({u.src * n2 + v.src, u.dst * n2 + v.dst, a1, a2});
    }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::pair(a.from, a.to) < std::pair(b.from, b.to); });
  if (y.size() != edges.size()) fail(ErrorKind::dimension, "matching_violation: y has the wrong length");

  std::vector<std::size_t> out1(n1, 0), in1(n1, 0), out2(n2, 0), in2(n2, 0);
  for (const auto& a : g1.arcs()) ++out1[a.src], ++in1[a.dst];
  for (const auto& a : g2.arcs()) ++out2[a.src], ++in2[a.dst];

  double worst = 0.0;
  auto over = [&](double lhs, double rhs) { worst = std::max(worst, lhs - rhs); };
  for (double v : x) over(-v, 0.0), over(v, 1.0);
  for (double v : y) over(-v, 0.0), over(v, 1.0);

  for (std::size_t i = 0; i < n1; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n2; ++j) s += x[i * n2 + j];
    over(s, 1.0);
  }
  for (std::size_t j = 0; j < n2; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n1; ++i) s += x[i * n2 + j];
    over(s, 1.0);
  }
  std::vector<double> per_arc1(g1.arc_count(), 0.0), per_arc2(g2.arc_count(), 0.0);
  std::vector<double> leaving(n1 * n2, 0.0), entering(n1 * n2, 0.0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    per_arc1[edges[e].arc1] += y[e];
    per_arc2[edges[e].arc2] += y[e];
    leaving[edges[e].from] += y[e];
    entering[edges[e].to] += y[e];
  }
  for (double s : per_arc1) over(s, 1.0);
  for (double s : per_arc2) over(s, 1.0);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      const std::size_t k = i * n2 + j;
      over(leaving[k], static_cast<double>(std::min(out1[i], out2[j])) * x[k]);
      over(entering[k], static_cast<double>(std::min(in1[i], in2[j])) * x[k]);
    }
  return worst;
}

}  // namespace tpgm::oracle
