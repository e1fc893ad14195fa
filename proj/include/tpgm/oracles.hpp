#pragma once

// Slow reference implementations. Each one is written independently of the
// production code path it checks and is only meant for small inputs.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tpgm/assignment.hpp"
#include "tpgm/context_sim.hpp"
#include "tpgm/graph.hpp"
#include "tpgm/lp.hpp"
#include "tpgm/matcher.hpp"

namespace tpgm::oracle {

struct BruteAssignment {
  Assignment assignment;
  double score = 0.0;
};

/// Best of all injections of the smaller side into the larger one, with each
/// score summed in increasing row order.
BruteAssignment best_assignment(std::span<const double> scores, std::size_t n1, std::size_t n2);

struct VertexOptimum {
  std::vector<double> z;
  double objective = 0.0;
  std::size_t vertices = 0;
};

/// Maximizes c'z over {A z <= b, 0 <= z <= 1} by solving every choice of
/// nvars tight constraints and keeping the feasible solutions.
VertexOptimum lp_by_vertices(const LinearProgram& lp, double tol = 1e-9);

/// counts[k](i, j) = number of length-k walks i -> j in a simple undirected
/// graph (symmetric 0/1 adjacency, row-major n x n) that never step straight
/// back along the edge just used. Found by depth-first enumeration.
std::vector<std::vector<std::int64_t>> backtrackless_walk_counts(std::span<const int> adjacency, std::size_t n,
                                                                 std::size_t k_max);

/// Contextual similarity by dense LU on the explicit system matrix.
std::vector<double> dense_cs(const ProductGraph& pg, WalkModel model);

/// vec(X)' K vec(X) by a dense double loop.
double dense_qap(const std::vector<double>& k_dense, std::size_t dim, std::span<const double> x);

/// Largest violation of the six matching constraint families and the box,
/// recomputed from the operand graphs. x is indexed by pair (i1*n2 + i2); y
/// follows the product-graph edge order, i.e. edges sorted by (source pair,
/// target pair).
double matching_violation(const AttributedGraph& g1, const AttributedGraph& g2, std::span<const double> x,
                          std::span<const double> y);

}  // namespace tpgm::oracle
