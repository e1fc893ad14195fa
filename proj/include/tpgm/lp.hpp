#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "tpgm/sparse.hpp"

namespace tpgm {

/// maximize c'z  subject to  A z <= b,  0 <= z <= 1.
///
/// b must be non-negative so that z = 0 is feasible.
struct LinearProgram {
  std::vector<double> c;
  SparseMatrix a;
  std::vector<double> b;

  std::size_t nvars() const noexcept { return c.size(); }
  std::size_t nrows() const noexcept { return b.size(); }
  void validate() const;
};

enum class LpStatus { optimal, iteration_limit };

std::string_view to_string(LpStatus s);

struct LpOptions {
  /// Pivot budget; 0 means 50 * (nvars + nrows).
  std::size_t max_pivots = 0;
  double feasibility_tol = 1e-7;
  /// Reduced-cost tolerance, relative to the largest cost.
  double optimality_tol = 1e-9;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t degenerate_limit = 50;
};

struct LpSolution {
  std::vector<double> z;
  double objective = 0.0;
  LpStatus status = LpStatus::optimal;
  std::size_t pivots = 0;
  std::size_t bound_flips = 0;
};

/// Bounded-variable revised simplex on the slack-extended problem, after
/// geometric equilibration and scaling the largest cost to about one. The
/// basis is kept as sparse LU factors with product-form updates. A dual phase from the all-slack basis (bound
/// flipping, dual steepest edge, perturbed costs) is followed by a primal
/// phase on the true costs (Devex pricing, Bland's rule while pivots stay
/// degenerate) that certifies optimality. Deterministic for identical input.
LpSolution lp_solve(const LinearProgram& lp, const LpOptions& opts = {});

/// Largest violation of A z <= b and of the box, for auditing.
double max_violation(const LinearProgram& lp, const std::vector<double>& z);

}  // namespace tpgm
