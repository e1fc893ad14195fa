#include "tpgm/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tpgm/error.hpp"

namespace tpgm {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> entries) {
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m(rows, cols);
  m.col_idx_.reserve(entries.size());
  m.values_.reserve(entries.size());
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const auto& t = entries[e];
    if (t.row >= rows || t.col >= cols)
      fail(ErrorKind::dimension, "sparse entry (" + std::to_string(t.row) + "," +
                                     std::to_string(t.col) + ") outside " +
                                     std::to_string(rows) + "x" + std::to_string(cols));
    if (e > 0 && entries[e - 1].row == t.row && entries[e - 1].col == t.col)
      fail(ErrorKind::invalid_argument, "duplicate sparse entry (" + std::to_string(t.row) +
                                            "," + std::to_string(t.col) + ")");
    if (!std::isfinite(t.value)) fail(ErrorKind::invalid_argument, "non-finite sparse entry");
    m.row_ptr_[t.row + 1]++;
    m.col_idx_.push_back(t.col);
    m.values_.push_back(t.value);
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

SparseMatrix SparseMatrix::from_csr(std::size_t rows, std::size_t cols,
                                    std::vector<std::size_t> row_ptr,
                                    std::vector<std::size_t> col_idx,
                                    std::vector<double> values) {
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_ = std::move(row_ptr);
  m.col_idx_ = std::move(col_idx);
  m.values_ = std::move(values);
  m.validate();
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> ptr(n + 1), idx(n);
  for (std::size_t i = 0; i < n; ++i) {
    ptr[i + 1] = i + 1;
    idx[i] = i;
  }
  return from_csr(n, n, std::move(ptr), std::move(idx), std::vector<double>(n, 1.0));
}

void SparseMatrix::validate() const {
  if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != col_idx_.size() || col_idx_.size() != values_.size())
    fail(ErrorKind::invalid_argument, "inconsistent CSR arrays");
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_ptr_[r] > row_ptr_[r + 1]) fail(ErrorKind::invalid_argument, "CSR row pointer decreases");
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      if (col_idx_[p] >= cols_) fail(ErrorKind::dimension, "CSR column index out of range");
      if (p > row_ptr_[r] && col_idx_[p] <= col_idx_[p - 1])
        fail(ErrorKind::invalid_argument, "CSR columns not strictly increasing");
      if (!std::isfinite(values_[p])) fail(ErrorKind::invalid_argument, "non-finite sparse entry");
    }
  }
}

std::span<const std::size_t> SparseMatrix::row_cols(std::size_t r) const {
  return std::span<const std::size_t>(col_idx_).subspan(row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]);
}

std::span<const double> SparseMatrix::row_values(std::size_t r) const {
  return std::span<const double>(values_).subspan(row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]);
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) fail(ErrorKind::dimension, "sparse index out of range");
  auto cols = row_cols(r);
  auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) return 0.0;
  return values_[row_ptr_[r] + static_cast<std::size_t>(it - cols.begin())];
}

bool SparseMatrix::contains(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) return false;
  auto cols = row_cols(r);
  return std::binary_search(cols.begin(), cols.end(), c);
}

SparseMatrix SparseMatrix::transposed() const {
  SparseMatrix t(cols_, rows_);
  for (std::size_t c : col_idx_) t.row_ptr_[c + 1]++;
  for (std::size_t c = 0; c < cols_; ++c) t.row_ptr_[c + 1] += t.row_ptr_[c];
  t.col_idx_.resize(nnz());
  t.values_.resize(nnz());
  std::vector<std::size_t> next(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      const std::size_t q = next[col_idx_[p]]++;
      t.col_idx_[q] = r;
      t.values_[q] = values_[p];
    }
  }
  return t;
}

SparseMatrix SparseMatrix::pruned() const {
  SparseMatrix m(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      if (values_[p] == 0.0) continue;
      m.col_idx_.push_back(col_idx_[p]);
      m.values_.push_back(values_[p]);
    }
    m.row_ptr_[r + 1] = m.col_idx_.size();
  }
  return m;
}

SparseMatrix SparseMatrix::with_values(std::vector<double> values) const {
  if (values.size() != nnz()) fail(ErrorKind::dimension, "value count does not match pattern");
  SparseMatrix m = *this;
  m.values_ = std::move(values);
  for (double v : m.values_)
    if (!std::isfinite(v)) fail(ErrorKind::invalid_argument, "non-finite sparse entry");
  return m;
}

std::vector<double> SparseMatrix::column_sums() const {
  std::vector<double> s(cols_, 0.0);
  for (std::size_t p = 0; p < nnz(); ++p) s[col_idx_[p]] += values_[p];
  return s;
}

std::vector<double> SparseMatrix::row_sums() const {
  std::vector<double> s(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) s[r] += values_[p];
  return s;
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> d(rows_ * cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) d[r * cols_ + col_idx_[p]] = values_[p];
  return d;
}

void spmv(const SparseMatrix& m, std::span<const double> x, std::span<double> y) {
  if (x.size() != m.cols() || y.size() != m.rows())
    fail(ErrorKind::dimension, "spmv: matrix is " + std::to_string(m.rows()) + "x" +
                                   std::to_string(m.cols()) + ", x has " +
                                   std::to_string(x.size()) + " entries");
  const auto ptr = m.row_ptr();
  const auto idx = m.col_idx();
  const auto val = m.values();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double acc = 0.0;
    for (std::size_t p = ptr[r]; p < ptr[r + 1]; ++p) acc += val[p] * x[idx[p]];
    y[r] = acc;
  }
}

std::vector<double> spmv(const SparseMatrix& m, std::span<const double> x) {
  std::vector<double> y(m.rows());
  spmv(m, x, y);
  return y;
}

}  // namespace tpgm
