#ifndef DEFLATE_PRECONDITIONER_HPP
#define DEFLATE_PRECONDITIONER_HPP

#include <span>

#include "deflate/sparse.hpp"

namespace deflate {

enum class PreconditionerKind { Identity, Jacobi };

/// Right preconditioner M. Only the action of M^-1 is ever needed.
class Preconditioner {
 public:
  Preconditioner() = default;

  static Preconditioner identity(std::size_t n);
  /// M = diag(A). Throws InvalidArgument on a zero diagonal entry.
  static Preconditioner jacobi(const SparseMatrix& a);

  PreconditionerKind kind() const { return kind_; }
  std::size_t n() const { return n_; }

  /// y = M^-1 v
  void apply(std::span<const double> v, std::span<double> y) const;
  Vector apply(std::span<const double> v) const;

  friend bool operator==(const Preconditioner&, const Preconditioner&) = default;

 private:
  PreconditionerKind kind_ = PreconditionerKind::Identity;
  std::size_t n_ = 0;
  Vector inv_diag_;
};

/// Componentwise v_i / a_ii.
Vector jacobi_apply(const Preconditioner& m, std::span<const double> v);

}  // namespace deflate

#endif
