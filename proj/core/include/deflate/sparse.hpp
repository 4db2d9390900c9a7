#ifndef DEFLATE_SPARSE_HPP
#define DEFLATE_SPARSE_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace deflate {

using Vector = std::vector<double>;

/// Entry of a matrix in coordinate form.
struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Square real matrix in compressed-row storage.
///
/// Column indices are strictly increasing inside each row. The matrix is
/// immutable once constructed.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Takes ownership of raw CSR arrays; throws InvalidArgument if the CSR
  /// invariants do not hold.
  SparseMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, Vector values);

  /// Duplicate entries are summed. Explicit zeros are kept.
  static SparseMatrix from_triplets(std::size_t n, std::vector<Triplet> entries);
  static SparseMatrix identity(std::size_t n);
  /// Keeps every entry whose magnitude is nonzero; `values` is row-major n x n.
  static SparseMatrix from_dense(std::size_t n, std::span<const double> values);

  std::size_t n() const { return n_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const std::size_t> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }

  /// Zero when (i, j) is not stored.
  double at(std::size_t i, std::size_t j) const;
  Vector diagonal() const;
  /// Row-major dense copy.
  Vector to_dense() const;
  double frobenius_norm() const;

  /// y = A x without allocating.
  void multiply(std::span<const double> x, std::span<double> y) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  Vector values_;
};

Vector spmv(const SparseMatrix& a, std::span<const double> x);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale(double alpha, std::span<double> x);

}  // namespace deflate

#endif
