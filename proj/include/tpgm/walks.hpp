#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "tpgm/sparse.hpp"

namespace tpgm {

/// Dense walk matrices W_0 .. W_{k_max} of the backtrackless recurrence,
/// evaluated literally from the right:
///   W_0 = I, W_1 = W, W_2 = W^2 - (Q + I), W_k = W_{k-1} W - W_{k-2} Q,
/// with Q = diag(W^2) - I. For a 0/1 symmetric adjacency matrix, entry (i, j)
/// of W_k counts the length-k walks from i to j that never immediately
/// reverse the arc just used.
std::vector<Eigen::MatrixXd> backtrackless_walk_matrices(const SparseMatrix& w, std::size_t k_max);

/// W_0 .. W_{k_max} with W_k = W^k.
std::vector<Eigen::MatrixXd> random_walk_matrices(const SparseMatrix& w, std::size_t k_max);

Eigen::MatrixXd to_eigen(const SparseMatrix& m);

}  // namespace tpgm
