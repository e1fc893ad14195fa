#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tpgm/affinity.hpp"
#include "tpgm/assignment.hpp"
#include "tpgm/context_sim.hpp"
#include "tpgm/graph.hpp"
#include "tpgm/lp.hpp"
#include "tpgm/product_graph.hpp"

namespace tpgm {

struct MatchConfig {
  WalkModel model = WalkModel::backtrackless;
  bool discretize = true;
  AffinityConfig affinity;
  SolverOptions solver;
  LpOptions lp;
  ProductGraphOptions product;
  /// Node-pair variables with S_V below this floor are fixed at zero and left
  /// out of the LP together with their incident edge variables. 0 disables.
  double prune_eps = 0.0;
};

struct StageTimings {
  double product_graph_ms = 0.0;
  double context_ms = 0.0;
  double lp_build_ms = 0.0;
  double lp_solve_ms = 0.0;
  double discretize_ms = 0.0;
  double total_ms = 0.0;
};

struct MatchResult {
  /// Node-pair selection, one entry per TPG node (pair index i1*n2 + i2).
  std::vector<double> x;
  /// Edge-pair selection, one entry per TPG edge in canonical order.
  std::vector<double> y;
  std::optional<Assignment> assignment;
  double objective_lp = 0.0;
  /// QAP objective of the discrete assignment; empty without discretization.
  std::optional<double> objective_qap;
  std::size_t lp_pivots = 0;
  StageTimings timings;
};

/// S_V: the contextual similarities in pair-index order.
std::vector<double> build_sv(const ContextualSimilarity& cs);

/// S_E(k -> l) = CS(k) / max(1, outdeg(k)) + CS(l) / max(1, outdeg(l)), one
/// entry per TPG edge, with structural TPG out-degrees.
std::vector<double> build_se(const ContextualSimilarity& cs, const ProductGraph& pg);

/// The node/edge selection LP over the product graph.
///
/// Variables are (x | y). Row blocks, in order: pattern nodes (n1), pattern
/// arcs (|E1|), target nodes (n2), target arcs (|E2|), outward degree (|V_X|),
/// inward degree (|V_X|). Every row is emitted even when empty.
struct MatchingLp {
  LinearProgram lp;
  /// TPG node of each x variable.
  std::vector<std::size_t> x_nodes;
  /// TPG edge of each y variable.
  std::vector<std::size_t> y_edges;

  std::size_t x_count() const noexcept { return x_nodes.size(); }
  std::size_t y_count() const noexcept { return y_edges.size(); }
};

MatchingLp build_matching_lp(const ProductGraph& pg, std::span<const double> sv, std::span<const double> se,
                             double prune_eps = 0.0);

/// Product graph -> contextual similarity -> LP -> (optional) Hungarian.
/// Errors carry the name of the failing stage.
MatchResult match(const AttributedGraph& g1, const AttributedGraph& g2, const MatchConfig& cfg = {});

}  // namespace tpgm
