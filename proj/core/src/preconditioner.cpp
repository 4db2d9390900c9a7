#include "deflate/preconditioner.hpp"

#include <algorithm>
#include <string>

#include "deflate/errors.hpp"

namespace deflate {

Preconditioner Preconditioner::identity(std::size_t n) {
  Preconditioner p;
  p.n_ = n;
  return p;
}

Preconditioner Preconditioner::jacobi(const SparseMatrix& a) {
  Preconditioner p;
  p.kind_ = PreconditionerKind::Jacobi;
  p.n_ = a.n();
  p.inv_diag_ = a.diagonal();
  for (std::size_t i = 0; i < p.n_; ++i) {
    if (p.inv_diag_[i] == 0.0) {
      throw InvalidArgument("jacobi: zero diagonal entry in row " + std::to_string(i));
    }
    p.inv_diag_[i] = 1.0 / p.inv_diag_[i];
  }
  return p;
}

void Preconditioner::apply(std::span<const double> v, std::span<double> y) const {
  if (v.size() != n_ || y.size() != n_) {
    throw DimensionMismatch("preconditioner: expected length " + std::to_string(n_));
  }
  if (kind_ == PreconditionerKind::Identity) {
    std::copy(v.begin(), v.end(), y.begin());
    return;
  }
  for (std::size_t i = 0; i < n_; ++i) y[i] = v[i] * inv_diag_[i];
}

Vector Preconditioner::apply(std::span<const double> v) const {
  Vector y(v.size());
  apply(v, y);
  return y;
}

Vector jacobi_apply(const Preconditioner& m, std::span<const double> v) { return m.apply(v); }

}  // namespace deflate
