#include "tpgm/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tpgm/error.hpp"

namespace tpgm {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void require_same_dim(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size())
    fail(ErrorKind::dimension, std::string(what) + " attributes have dimensions " +
                                   std::to_string(a.size()) + " and " + std::to_string(b.size()));
}

double vector_kernel(const AffinityConfig& cfg, KernelKind kind, std::span<const double> a,
                     std::span<const double> b, const char* what) {
  require_same_dim(a, b, what);
  switch (kind) {
    case KernelKind::gaussian: return std::exp(-squared_distance(a, b) / cfg.bandwidth);
    case KernelKind::exp_neg_distance: return std::exp(-std::sqrt(squared_distance(a, b)));
    case KernelKind::dot_product: {
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
      return std::max(0.0, s);
    }
    case KernelKind::exp_neg_hausdorff:
      fail(ErrorKind::invalid_argument,
           std::string("exp_neg_hausdorff needs set-valued ") + what + " attributes");
  }
  fail(ErrorKind::internal, "unknown kernel");
}

}  // namespace

std::string_view to_string(KernelKind k) {
  switch (k) {
    case KernelKind::gaussian: return "gaussian";
    case KernelKind::dot_product: return "dot_product";
    case KernelKind::exp_neg_distance: return "exp_neg_distance";
    case KernelKind::exp_neg_hausdorff: return "exp_neg_hausdorff";
  }
  return "?";
}

KernelKind parse_kernel(std::string_view name) {
  for (auto k : {KernelKind::gaussian, KernelKind::dot_product, KernelKind::exp_neg_distance,
                 KernelKind::exp_neg_hausdorff})
    if (to_string(k) == name) return k;
  fail(ErrorKind::parse, "unknown kernel '" + std::string(name) + "'");
}

void AffinityConfig::validate() const {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    fail(ErrorKind::invalid_argument, "bandwidth must be positive and finite");
  if (edge_kernel == KernelKind::exp_neg_hausdorff)
    fail(ErrorKind::invalid_argument, "edge attributes are vectors; exp_neg_hausdorff is node-only");
}

double node_affinity(const AffinityConfig& cfg, const NodeAttr& a1, const NodeAttr& a2) {
  if (kind_of(a1) != kind_of(a2)) fail(ErrorKind::dimension, "node attribute kinds differ");
  if (kind_of(a1) == AttrKind::point_set) {
    if (cfg.node_kernel != KernelKind::exp_neg_hausdorff)
      fail(ErrorKind::invalid_argument, "set-valued node attributes need exp_neg_hausdorff");
    return std::exp(-modified_hausdorff(std::get<PointSet>(a1), std::get<PointSet>(a2)));
  }
  return vector_kernel(cfg, cfg.node_kernel, std::get<Vector>(a1), std::get<Vector>(a2), "node");
}

double edge_affinity(const AffinityConfig& cfg, std::span<const double> b1, std::span<const double> b2) {
  return vector_kernel(cfg, cfg.edge_kernel, b1, b2, "edge");
}

double modified_hausdorff(const PointSet& a, const PointSet& b) {
  if (a.empty() || b.empty()) fail(ErrorKind::invalid_argument, "modified_hausdorff of an empty set");
  const std::size_t dim = a.front().size();
  for (const auto* set : {&a, &b})
    for (const auto& p : *set)
      if (p.size() != dim) fail(ErrorKind::dimension, "modified_hausdorff: point dimensions differ");

  // dist[i][j] computed once and scanned both ways keeps the result exactly
  // symmetric in (a, b).
  std::vector<double> dist(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      dist[i * b.size() + j] = std::sqrt(squared_distance(a[i], b[j]));

  double from_a = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) m = std::min(m, dist[i * b.size() + j]);
    from_a += m;
  }
  double from_b = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) m = std::min(m, dist[i * b.size() + j]);
    from_b += m;
  }
  // Add in a fixed order that does not depend on which argument came first.
  return std::min(from_a, from_b) + std::max(from_a, from_b);
}

void check_compatible(const AttributedGraph& g1, const AttributedGraph& g2, const AffinityConfig& cfg) {
  cfg.validate();
  if (g1.node_count() > 0 && g2.node_count() > 0) {
    if (g1.node_kind() != g2.node_kind()) fail(ErrorKind::dimension, "node attribute kinds differ");
    if (g1.node_dim() != g2.node_dim())
      fail(ErrorKind::dimension, "node attribute dimensions differ (" + std::to_string(g1.node_dim()) +
                                     " vs " + std::to_string(g2.node_dim()) + ")");
    const bool sets = g1.node_kind() == AttrKind::point_set;
    if (sets != (cfg.node_kernel == KernelKind::exp_neg_hausdorff))
      fail(ErrorKind::invalid_argument, std::string("node kernel ") +
                                            std::string(to_string(cfg.node_kernel)) +
                                            " does not fit the node attribute kind");
  }
  if (g1.arc_count() > 0 && g2.arc_count() > 0 && g1.edge_dim() != g2.edge_dim())
    fail(ErrorKind::dimension, "edge attribute dimensions differ (" + std::to_string(g1.edge_dim()) +
                                   " vs " + std::to_string(g2.edge_dim()) + ")");
}

SparseMatrix build_affinity_matrix(const AttributedGraph& g1, const AttributedGraph& g2,
                                   const AffinityConfig& cfg) {
  check_compatible(g1, g2, cfg);
  const std::size_t n1 = g1.node_count();
  const std::size_t n2 = g2.node_count();
  std::vector<Triplet> t;
  t.reserve(n1 * n2 + g1.arc_count() * g2.arc_count());
  for (std::size_t i1 = 0; i1 < n1; ++i1)
    for (std::size_t i2 = 0; i2 < n2; ++i2)
      t.push_back({i1 * n2 + i2, i1 * n2 + i2, node_affinity(cfg, g1.node(i1), g2.node(i2))});
  for (const auto& a1 : g1.arcs())
    for (const auto& a2 : g2.arcs())
      t.push_back({a1.src * n2 + a2.src, a1.dst * n2 + a2.dst, edge_affinity(cfg, a1.attr, a2.attr)});
  return SparseMatrix::from_triplets(n1 * n2, n1 * n2, std::move(t));
}

double qap_objective(const SparseMatrix& k, std::span<const double> x) {
  if (k.rows() != k.cols() || x.size() != k.rows())
    fail(ErrorKind::dimension, "qap_objective: K is " + std::to_string(k.rows()) + "x" +
                                   std::to_string(k.cols()) + ", vec(X) has " +
                                   std::to_string(x.size()) + " entries");
  const auto kx = spmv(k, x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * kx[i];
  return s;
}

double qap_objective(const SparseMatrix& k, const Assignment& x) {
  return qap_objective(k, x.indicator());
}

}  // namespace tpgm
