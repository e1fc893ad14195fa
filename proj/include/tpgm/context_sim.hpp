#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "tpgm/product_graph.hpp"

namespace tpgm {

enum class WalkModel { pairwise, random_walk, backtrackless };

std::string_view to_string(WalkModel m);
/// Accepts pairwise / random_walk / backtrackless and the short names
/// PG-N / PG-R / PG-B.
WalkModel parse_walk_model(std::string_view name);

struct SolverOptions {
  /// Relative residual target: ||A x - 1||_2 <= rtol * sqrt(dim).
  double rtol = 1e-9;
  /// Iteration budget is max_iter_factor * dim.
  double max_iter_factor = 10.0;
  /// Systems smaller than this are solved by dense LU; larger ones by GMRES.
  std::size_t dense_threshold = 500;
};

struct SolverStats {
  std::size_t iterations = 0;
  double residual = 0.0;
  bool dense = false;
};

/// Per-TPG-node contextual similarity, indexed like the product graph.
struct ContextualSimilarity {
  std::vector<double> values;
  WalkModel model = WalkModel::pairwise;
  SolverStats stats;
};

/// values = p_X.
ContextualSimilarity cs_pairwise(const ProductGraph& pg);

/// values = p_X .* x with (I - lambda W_X) x = 1.
ContextualSimilarity cs_random_walk(const ProductGraph& pg, const SolverOptions& opts = {});

/// values = p_X .* (1 - lambda^2) x with (I - lambda W_X + lambda^2 Q_X) x = 1.
/// At lambda = 1, where that product is 0 * inf, the walk series is summed
/// directly and a solver error is raised if it does not terminate.
ContextualSimilarity cs_backtrackless(const ProductGraph& pg, const SolverOptions& opts = {});

/// values = p_X .* (sum_{k=0}^{n_terms} lambda^k W_k) 1 with W_0 = I.
/// random_walk uses W_k = W^k. backtrackless uses W_1 = W, W_2 = W^2 - (Q + I),
/// W_k = W_{k-1} W - W_{k-2} Q; no (1 - lambda^2) factor is applied, since the
/// full series already equals the scaled closed form.
ContextualSimilarity cs_truncated(const ProductGraph& pg, WalkModel model, std::size_t n_terms);

ContextualSimilarity contextual_similarity(const ProductGraph& pg, WalkModel model,
                                           const SolverOptions& opts = {});

}  // namespace tpgm
