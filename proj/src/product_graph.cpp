#include "tpgm/product_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tpgm/error.hpp"

namespace tpgm {

namespace {

void rescale_by_max(std::vector<double>& v) {
  const double m = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  if (m > 0.0)
    for (double& x : v) x /= m;
}

}  // namespace

double default_lambda_rule(std::size_t max_out_degree, std::size_t max_in_degree) {
  return 1.0 / static_cast<double>(std::max<std::size_t>(1, std::min(max_out_degree, max_in_degree)));
}

std::vector<double> normalize_p(std::span<const double> raw) {
  double sum = 0.0;
  for (double v : raw) {
    if (!(v >= 0.0) || !std::isfinite(v))
      fail(ErrorKind::invalid_argument, "stopping distribution entries must be finite and >= 0");
    sum += v;
  }
  std::vector<double> p(raw.begin(), raw.end());
  if (p.empty()) return p;
  if (sum == 0.0) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
    return p;
  }
  for (double& v : p) v /= sum;
  return p;
}

SparseMatrix normalize_w(const SparseMatrix& raw) {
  const auto vals = raw.values();
  for (double v : vals)
    if (v < 0.0) fail(ErrorKind::invalid_argument, "transition weights must be >= 0");
  const auto sums = raw.column_sums();
  const auto cols = raw.col_idx();
  std::vector<double> out(vals.begin(), vals.end());
  for (std::size_t p = 0; p < out.size(); ++p)
    if (sums[cols[p]] > 0.0) out[p] /= sums[cols[p]];
  return raw.with_values(std::move(out));
}

std::vector<double> compute_qx(const SparseMatrix& w) {
  if (w.rows() != w.cols()) fail(ErrorKind::dimension, "compute_qx needs a square matrix");
  std::vector<double> q(w.rows(), -1.0);
  for (std::size_t k = 0; k < w.rows(); ++k) {
    const auto cols = w.row_cols(k);
    const auto vals = w.row_values(k);
    double s = 0.0;
    for (std::size_t p = 0; p < cols.size(); ++p) s += vals[p] * w.at(cols[p], k);
    q[k] += s;
  }
  return q;
}

ProductGraph ProductGraph::build(const AttributedGraph& g1, const AttributedGraph& g2,
                                 const AffinityConfig& cfg, const ProductGraphOptions& opts) {
  check_compatible(g1, g2, cfg);
  const std::size_t n1 = g1.node_count();
  const std::size_t n2 = g2.node_count();
  if (n1 == 0 || n2 == 0) fail(ErrorKind::invalid_argument, "both graphs need at least one node");
  if (n2 > opts.max_tpg_nodes / n1)
    fail(ErrorKind::size_cap, "product graph would have " + std::to_string(n1) + "*" +
                                  std::to_string(n2) + " nodes, cap is " +
                                  std::to_string(opts.max_tpg_nodes));

  ProductGraph pg;
  pg.n1_ = n1;
  pg.n2_ = n2;
  const std::size_t dim = n1 * n2;

  std::vector<double> raw_p(dim);
  for (std::size_t i1 = 0; i1 < n1; ++i1)
    for (std::size_t i2 = 0; i2 < n2; ++i2) raw_p[i1 * n2 + i2] = node_affinity(cfg, g1.node(i1), g2.node(i2));
  if (cfg.node_kernel == KernelKind::dot_product) rescale_by_max(raw_p);
  pg.p_ = normalize_p(raw_p);

  // Rows in increasing k; within a row, (dst1, dst2) pairs come out in
  // increasing l because both out-arc lists are sorted by destination.
  std::vector<std::size_t> row_ptr(dim + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> raw_w;
  const std::size_t edges = g1.arc_count() * g2.arc_count();
  col_idx.reserve(edges);
  raw_w.reserve(edges);
  pg.edge_src_.reserve(edges);
  pg.edge_arc1_.reserve(edges);
  pg.edge_arc2_.reserve(edges);
  for (std::size_t i1 = 0; i1 < n1; ++i1) {
    const auto out1 = g1.out_arcs(i1);
    for (std::size_t i2 = 0; i2 < n2; ++i2) {
      const std::size_t k = i1 * n2 + i2;
      const auto out2 = g2.out_arcs(i2);
      for (std::size_t a1 : out1) {
        const Arc& arc1 = g1.arc(a1);
        for (std::size_t a2 : out2) {
          const Arc& arc2 = g2.arc(a2);
          col_idx.push_back(arc1.dst * n2 + arc2.dst);
          raw_w.push_back(edge_affinity(cfg, arc1.attr, arc2.attr));
          pg.edge_src_.push_back(k);
          pg.edge_arc1_.push_back(a1);
          pg.edge_arc2_.push_back(a2);
        }
      }
      row_ptr[k + 1] = col_idx.size();
    }
  }
  if (cfg.edge_kernel == KernelKind::dot_product) rescale_by_max(raw_w);
  pg.w_ = normalize_w(SparseMatrix::from_csr(dim, dim, std::move(row_ptr), std::move(col_idx), std::move(raw_w)));

  pg.arcs1_ = g1.arc_count();
  pg.arcs2_ = g2.arc_count();
  pg.g1_out_ = out_degrees(g1);
  pg.g1_in_ = in_degrees(g1);
  pg.g2_out_ = out_degrees(g2);
  pg.g2_in_ = in_degrees(g2);
  pg.finish(opts, std::nullopt);
  return pg;
}

ProductGraph ProductGraph::from_matrices(std::vector<double> p, SparseMatrix w,
                                         std::optional<double> lambda, const ProductGraphOptions& opts) {
  if (w.rows() != w.cols() || w.rows() != p.size())
    fail(ErrorKind::dimension, "from_matrices: W must be square and match p");
  if (p.empty()) fail(ErrorKind::invalid_argument, "from_matrices: empty product graph");
  if (p.size() > opts.max_tpg_nodes)
    fail(ErrorKind::size_cap, "product graph has " + std::to_string(p.size()) + " nodes, cap is " +
                                  std::to_string(opts.max_tpg_nodes));
  for (double v : w.values())
    if (v < 0.0) fail(ErrorKind::invalid_argument, "transition weights must be >= 0");
  if (lambda && !(*lambda > 0.0)) fail(ErrorKind::invalid_argument, "lambda must be positive");

  ProductGraph pg;
  pg.n1_ = p.size();
  pg.n2_ = 1;
  pg.p_ = normalize_p(p);
  pg.w_ = std::move(w);
  pg.edge_src_.reserve(pg.w_.nnz());
  for (std::size_t k = 0; k < pg.w_.rows(); ++k)
    for (std::size_t q = pg.w_.row_ptr()[k]; q < pg.w_.row_ptr()[k + 1]; ++q) pg.edge_src_.push_back(k);
  pg.finish(opts, lambda);
  return pg;
}

void ProductGraph::finish(const ProductGraphOptions& opts, std::optional<double> lambda) {
  const std::size_t dim = p_.size();
  out_degree_.assign(dim, 0);
  in_degree_.assign(dim, 0);
  for (std::size_t k = 0; k < dim; ++k) out_degree_[k] = w_.row_cols(k).size();
  for (std::size_t l : w_.col_idx()) in_degree_[l]++;
  max_out_ = dim ? *std::max_element(out_degree_.begin(), out_degree_.end()) : 0;
  max_in_ = dim ? *std::max_element(in_degree_.begin(), in_degree_.end()) : 0;
  lambda_ = lambda ? *lambda : opts.lambda_rule(max_out_, max_in_);
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_))
    fail(ErrorKind::invalid_argument, "walk discount must be positive and finite");
  qx_ = compute_qx(w_);
}

}  // namespace tpgm
