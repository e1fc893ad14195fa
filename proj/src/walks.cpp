#include "tpgm/walks.hpp"

#include "tpgm/error.hpp"
#include "tpgm/product_graph.hpp"

namespace tpgm {

Eigen::MatrixXd to_eigen(const SparseMatrix& m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto cols = m.row_cols(r);
    const auto vals = m.row_values(r);
    for (std::size_t p = 0; p < cols.size(); ++p)
      d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols[p])) = vals[p];
  }
  return d;
}

std::vector<Eigen::MatrixXd> backtrackless_walk_matrices(const SparseMatrix& w, std::size_t k_max) {
  if (w.rows() != w.cols()) fail(ErrorKind::dimension, "walk matrices need a square matrix");
  const auto n = static_cast<Eigen::Index>(w.rows());
  const Eigen::MatrixXd wd = to_eigen(w);
  const auto qv = compute_qx(w);
  Eigen::VectorXd q(n);
  for (Eigen::Index i = 0; i < n; ++i) q(i) = qv[static_cast<std::size_t>(i)];

  std::vector<Eigen::MatrixXd> out;
  out.push_back(Eigen::MatrixXd::Identity(n, n));
  if (k_max >= 1) out.push_back(wd);
  if (k_max >= 2) {
    Eigen::MatrixXd w2 = wd * wd;
    w2.diagonal() -= (q.array() + 1.0).matrix();
    out.push_back(std::move(w2));
  }
  for (std::size_t k = 3; k <= k_max; ++k)
    out.push_back(out[k - 1] * wd - out[k - 2] * q.asDiagonal());
  return out;
}

std::vector<Eigen::MatrixXd> random_walk_matrices(const SparseMatrix& w, std::size_t k_max) {
  if (w.rows() != w.cols()) fail(ErrorKind::dimension, "walk matrices need a square matrix");
  const auto n = static_cast<Eigen::Index>(w.rows());
  const Eigen::MatrixXd wd = to_eigen(w);
  std::vector<Eigen::MatrixXd> out;
  out.push_back(Eigen::MatrixXd::Identity(n, n));
  for (std::size_t k = 1; k <= k_max; ++k) out.push_back(out.back() * wd);
  return out;
}

}  // namespace tpgm
