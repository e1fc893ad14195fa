#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tpgm/affinity.hpp"
#include "tpgm/graph.hpp"
#include "tpgm/sparse.hpp"

namespace tpgm {

/// Walk discount from the maximum structural out- and in-degree of W_X.
using LambdaRule = double (*)(std::size_t max_out_degree, std::size_t max_in_degree);

/// 1 / max(1, min(max_out, max_in)).
double default_lambda_rule(std::size_t max_out_degree, std::size_t max_in_degree);

struct ProductGraphOptions {
  std::size_t max_tpg_nodes = 2'000'000;
  LambdaRule lambda_rule = &default_lambda_rule;
};

/// Tensor product graph of a pattern g1 and a target g2.
///
/// Node k = i1 * n2 + i2 stands for the pair (i1, i2). W_X holds an entry at
/// (k, l) for every TPG edge k -> l, i.e. whenever i1 -> j1 is an arc of g1
/// and i2 -> j2 an arc of g2. The stored pattern is exactly E_X (entries with
/// a zero weight stay stored), and the CSR position of an entry is the
/// canonical, source-major TPG edge index used by the matcher.
class ProductGraph {
 public:
  static ProductGraph build(const AttributedGraph& g1, const AttributedGraph& g2,
                            const AffinityConfig& cfg, const ProductGraphOptions& opts = {});

  /// Product graph over a bare weighted digraph: `p` is normalized, `w` is used
  /// as given (it is not column-normalized), lambda comes from the rule unless
  /// supplied. There are no operand graphs, so n1 = dim and n2 = 1 and the
  /// operand-edge bookkeeping is empty. Intended for walk-level experiments.
  static ProductGraph from_matrices(std::vector<double> p, SparseMatrix w,
                                    std::optional<double> lambda = std::nullopt,
                                    const ProductGraphOptions& opts = {});

  std::size_t n1() const noexcept { return n1_; }
  std::size_t n2() const noexcept { return n2_; }
  std::size_t size() const noexcept { return p_.size(); }
  std::size_t edge_count() const noexcept { return w_.nnz(); }

  std::size_t pair_index(std::size_t i1, std::size_t i2) const noexcept { return i1 * n2_ + i2; }
  NodePair pair_of(std::size_t k) const noexcept { return {k / n2_, k % n2_}; }

  std::span<const double> p() const noexcept { return p_; }
  const SparseMatrix& w() const noexcept { return w_; }
  std::span<const std::size_t> out_degree() const noexcept { return out_degree_; }
  std::span<const std::size_t> in_degree() const noexcept { return in_degree_; }
  std::size_t max_out_degree() const noexcept { return max_out_; }
  std::size_t max_in_degree() const noexcept { return max_in_; }
  double lambda() const noexcept { return lambda_; }
  std::span<const double> qx() const noexcept { return qx_; }

  /// Source / target TPG node of edge e (CSR position in w()).
  std::size_t edge_source(std::size_t e) const noexcept { return edge_src_[e]; }
  std::size_t edge_target(std::size_t e) const noexcept { return w_.col_idx()[e]; }
  /// Arc of g1 / g2 that TPG edge e projects onto. Empty for from_matrices.
  std::span<const std::size_t> edge_arc1() const noexcept { return edge_arc1_; }
  std::span<const std::size_t> edge_arc2() const noexcept { return edge_arc2_; }

  std::size_t arc_count1() const noexcept { return arcs1_; }
  std::size_t arc_count2() const noexcept { return arcs2_; }
  std::span<const std::size_t> g1_out_degree() const noexcept { return g1_out_; }
  std::span<const std::size_t> g1_in_degree() const noexcept { return g1_in_; }
  std::span<const std::size_t> g2_out_degree() const noexcept { return g2_out_; }
  std::span<const std::size_t> g2_in_degree() const noexcept { return g2_in_; }

 private:
  void finish(const ProductGraphOptions& opts, std::optional<double> lambda);

  std::size_t n1_ = 0;
  std::size_t n2_ = 1;
  std::vector<double> p_;
  SparseMatrix w_;
  std::vector<std::size_t> out_degree_;
  std::vector<std::size_t> in_degree_;
  std::size_t max_out_ = 0;
  std::size_t max_in_ = 0;
  double lambda_ = 1.0;
  std::vector<double> qx_;
  std::vector<std::size_t> edge_src_;
  std::vector<std::size_t> edge_arc1_;
  std::vector<std::size_t> edge_arc2_;
  std::size_t arcs1_ = 0;
  std::size_t arcs2_ = 0;
  std::vector<std::size_t> g1_out_, g1_in_, g2_out_, g2_in_;
};

/// Scales a non-negative vector to sum one; all-zero input maps to uniform.
std::vector<double> normalize_p(std::span<const double> raw);

/// Divides every column with a positive sum by that sum; zero columns stay zero.
SparseMatrix normalize_w(const SparseMatrix& raw);

/// Q_X[k] = (W^2)_kk - 1 = sum_l W[k,l] W[l,k] - 1, without forming W^2.
std::vector<double> compute_qx(const SparseMatrix& w);

}  // namespace tpgm
