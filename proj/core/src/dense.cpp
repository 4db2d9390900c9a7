#include "deflate/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "deflate/errors.hpp"

namespace deflate {

DenseMatrix to_dense(const SparseMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.n());
  DenseMatrix m = DenseMatrix::Zero(n, n);
  auto offsets = a.row_offsets();
  auto cols = a.col_indices();
  auto vals = a.values();
  for (std::size_t i = 0; i < a.n(); ++i) {
    for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(cols[p])) = vals[p];
    }
  }
  return m;
}

Vector LUFactors::solve(std::span<const double> b) const {
  if (b.size() != size()) throw DimensionMismatch("LUFactors::solve: length mismatch");
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
  Eigen::VectorXd x = lu_.solve(rhs);
  return Vector(x.data(), x.data() + x.size());
}

double LUFactors::min_pivot() const {
  if (lu_.rows() == 0) return 0.0;
  return lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
}

LUFactors dense_lu(const DenseMatrix& m, double pivot_tolerance) {
  if (m.rows() != m.cols()) throw DimensionMismatch("dense_lu: matrix must be square");
  if (m.rows() == 0) throw InvalidArgument("dense_lu: empty matrix");
  LUFactors factors{Eigen::PartialPivLU<Eigen::MatrixXd>(Eigen::MatrixXd(m))};
  double pivot = factors.min_pivot();
  if (!(pivot > pivot_tolerance)) {
    throw SingularCoarseMatrix("dense_lu: pivot " + std::to_string(pivot) +
                               " at or below threshold " + std::to_string(pivot_tolerance));
  }
  return factors;
}

bool magnitude_order(const Complex& a, const Complex& b) {
  double ma = std::abs(a);
  double mb = std::abs(b);
  if (ma != mb) return ma < mb;
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() > b.imag();
}

EigenDecomposition dense_eig(const DenseMatrix& m, bool compute_vectors) {
  if (m.rows() != m.cols()) throw DimensionMismatch("dense_eig: matrix must be square");
  EigenDecomposition out;
  if (m.rows() == 0) return out;
  if (!m.allFinite()) throw EigNonConvergence("dense_eig: matrix has non-finite entries");

  Eigen::EigenSolver<Eigen::MatrixXd> solver;
  solver.compute(Eigen::MatrixXd(m), compute_vectors);
  if (solver.info() != Eigen::Success) {
    throw EigNonConvergence("dense_eig: QR iteration did not converge");
  }
  const Eigen::VectorXcd& values = solver.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return magnitude_order(values(a), values(b));
  });
  out.values.reserve(order.size());
  for (auto k : order) out.values.push_back(values(k));
  if (compute_vectors) {
    Eigen::MatrixXcd vecs = solver.eigenvectors();
    out.vectors.resize(vecs.rows(), vecs.cols());
    for (std::size_t c = 0; c < order.size(); ++c) {
      out.vectors.col(static_cast<Eigen::Index>(c)) = vecs.col(order[c]);
    }
  }
  return out;
}

}  // namespace deflate
