#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tpgm {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix.
///
/// Columns within a row are strictly increasing and every stored value is
/// finite. Explicit zeros may be stored (the product graph keeps its full
/// structural pattern); `pruned()` drops them.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  /// Builds from unordered triplets. Duplicate coordinates are rejected.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> entries);

  /// Builds directly from CSR arrays; validates ordering and finiteness.
  static SparseMatrix from_csr(std::size_t rows, std::size_t cols,
                               std::vector<std::size_t> row_ptr,
                               std::vector<std::size_t> col_idx,
                               std::vector<double> values);

  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const std::size_t> row_cols(std::size_t r) const;
  std::span<const double> row_values(std::size_t r) const;

  /// Stored value at (r, c), zero when absent.
  double at(std::size_t r, std::size_t c) const;
  /// True when (r, c) is part of the stored pattern (even if the value is 0).
  bool contains(std::size_t r, std::size_t c) const;

  SparseMatrix transposed() const;
  SparseMatrix pruned() const;

  /// Same pattern, new values (one per stored entry, CSR order).
  SparseMatrix with_values(std::vector<double> values) const;

  std::vector<double> column_sums() const;
  std::vector<double> row_sums() const;

  /// Row-major dense copy; intended for small matrices and tests.
  std::vector<double> to_dense() const;

 private:
  void validate() const;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

/// y = m * x.
std::vector<double> spmv(const SparseMatrix& m, std::span<const double> x);
/// y = m * x into a caller-provided buffer.
void spmv(const SparseMatrix& m, std::span<const double> x, std::span<double> y);

}  // namespace tpgm
