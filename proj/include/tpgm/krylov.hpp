#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tpgm {

/// y = A x for a square operator of fixed dimension.
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct KrylovResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  /// True residual ||b - A x||_2 at exit.
  double residual_norm = 0.0;
  bool converged = false;
};

/// Restarted GMRES(restart) from a zero initial guess. Stops once
/// ||b - A x||_2 <= rtol * ||b||_2 or after max_iter inner iterations.
KrylovResult gmres(const LinearOperator& a, std::span<const double> b, double rtol,
                   std::size_t max_iter, std::size_t restart = 60);

}  // namespace tpgm
