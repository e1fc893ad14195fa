#pragma once

#include <span>
#include <string>
#include <string_view>

#include "tpgm/assignment.hpp"
#include "tpgm/graph.hpp"
#include "tpgm/sparse.hpp"

namespace tpgm {

enum class KernelKind {
  gaussian,           ///< exp(-|a-b|^2 / bandwidth)
  dot_product,        ///< max(0, a.b); unbounded, rescaled before use as a walk weight
  exp_neg_distance,   ///< exp(-|a-b|)
  exp_neg_hausdorff,  ///< exp(-d(A,B)) with the modified Hausdorff distance; set attributes only
};

std::string_view to_string(KernelKind k);
KernelKind parse_kernel(std::string_view name);

struct AffinityConfig {
  KernelKind node_kernel = KernelKind::gaussian;
  KernelKind edge_kernel = KernelKind::gaussian;
  /// Gaussian bandwidth. The exp_neg_* kernels do not use it.
  double bandwidth = 0.15;

  void validate() const;
};

double node_affinity(const AffinityConfig& cfg, const NodeAttr& a1, const NodeAttr& a2);
double edge_affinity(const AffinityConfig& cfg, std::span<const double> b1, std::span<const double> b2);

/// d(A,B) = sum_a min_b |a-b| + sum_b min_a |a-b| with Euclidean |.|.
double modified_hausdorff(const PointSet& a, const PointSet& b);

/// Throws unless both graphs' attributes can be fed to the configured kernels.
void check_compatible(const AttributedGraph& g1, const AttributedGraph& g2, const AffinityConfig& cfg);

/// QAP affinity matrix K of size (n1*n2)^2 with pair index i1*n2 + i2.
/// Diagonal holds node affinities; entry (i1i2, j1j2) holds the affinity of
/// arcs i1->j1 and i2->j2 when both exist. Raw kernel values, no rescaling.
SparseMatrix build_affinity_matrix(const AttributedGraph& g1, const AttributedGraph& g2,
                                   const AffinityConfig& cfg);

/// vec(X)' K vec(X) for a 0/1 vector x.
double qap_objective(const SparseMatrix& k, std::span<const double> x);
double qap_objective(const SparseMatrix& k, const Assignment& x);

}  // namespace tpgm
