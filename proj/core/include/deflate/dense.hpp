#ifndef DEFLATE_DENSE_HPP
#define DEFLATE_DENSE_HPP

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "deflate/sparse.hpp"

namespace deflate {

/// Small dense real matrix, row-major.
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Complex = std::complex<double>;

DenseMatrix to_dense(const SparseMatrix& a);

/// Partial-pivoting LU factors of a square matrix.
class LUFactors {
 public:
  LUFactors() = default;
  explicit LUFactors(Eigen::PartialPivLU<Eigen::MatrixXd> lu) : lu_(std::move(lu)) {}

  std::size_t size() const { return static_cast<std::size_t>(lu_.rows()); }
  Vector solve(std::span<const double> b) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const { return lu_.solve(b); }
  /// Smallest pivot magnitude |U_ii|.
  double min_pivot() const;

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// PA = LU. Throws SingularCoarseMatrix when a pivot magnitude is at or
/// below `pivot_tolerance`.
LUFactors dense_lu(const DenseMatrix& m, double pivot_tolerance = 1e-300);

/// Eigenvalues (and optionally eigenvectors as columns) of a real square
/// matrix, sorted by magnitude. Conjugate pairs are adjacent, positive
/// imaginary part first.
struct EigenDecomposition {
  std::vector<Complex> values;
  Eigen::MatrixXcd vectors;
};

EigenDecomposition dense_eig(const DenseMatrix& m, bool compute_vectors = false);

/// Ordering used for every eigenvalue list in the library: |z| ascending,
/// then smaller real part, then nonnegative imaginary part first.
bool magnitude_order(const Complex& a, const Complex& b);

}  // namespace deflate

#endif
