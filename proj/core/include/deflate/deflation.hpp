#ifndef DEFLATE_DEFLATION_HPP
#define DEFLATE_DEFLATION_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "deflate/dense.hpp"
#include "deflate/preconditioner.hpp"
#include "deflate/sparse.hpp"

namespace deflate {

/// The n x d matrix Z, stored column by column. A column is either dense or
/// given by its nonzero entries.
class DeflationBasis {
 public:
  struct Column {
    /// Empty for a dense column.
    std::vector<std::size_t> index;
    Vector value;

    bool dense() const { return index.empty(); }
    friend bool operator==(const Column&, const Column&) = default;
  };

  DeflationBasis() = default;
  explicit DeflationBasis(std::size_t n) : n_(n) {}

  static DeflationBasis from_columns(std::size_t n, const std::vector<Vector>& columns);
  /// Row-major n x d block.
  static DeflationBasis from_dense(std::size_t n, std::size_t d, std::span<const double> values);

  void add_dense(Vector column);
  void add_sparse(std::vector<std::size_t> index, Vector value);
  /// Keeps only the nonzero entries of `column`.
  void add_compressed(std::span<const double> column);

  std::size_t n() const { return n_; }
  std::size_t d() const { return columns_.size(); }
  const Column& column(std::size_t j) const { return columns_[j]; }
  Vector dense_column(std::size_t j) const;
  std::size_t stored_entries() const;

  /// z_j^T v
  double dot(std::size_t j, std::span<const double> v) const;
  /// y += alpha z_j
  void axpy(std::size_t j, double alpha, std::span<double> y) const;
  /// Z^T v
  Vector transpose_apply(std::span<const double> v) const;
  /// y += Z c
  void apply_add(std::span<const double> c, std::span<double> y) const;

  friend bool operator==(const DeflationBasis&, const DeflationBasis&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Column> columns_;
};

/// Which operator the projectors are built from: A itself or the right
/// preconditioned A M^-1.
enum class ProjectionOperator { A, APreconditioned };

/// Everything P1, P2 and the coarse correction need. Immutable once built.
struct DeflationContext {
  SparseMatrix A;
  Preconditioner M;
  ProjectionOperator choice = ProjectionOperator::A;
  DeflationBasis Z;
  /// A_p Z, compressed per column.
  DeflationBasis AZ;
  DenseMatrix E;
  LUFactors E_lu;
  Vector ztb;
  /// Z E^-1 Z^T b
  Vector x_star;

  std::size_t n() const { return A.n(); }
  std::size_t d() const { return Z.d(); }
  bool active() const { return Z.d() > 0; }

  /// d = 0 context: P1 = P2 = I, x* = 0.
  static DeflationContext none(const SparseMatrix& a);
};

DeflationContext build_context(const SparseMatrix& a, const Preconditioner& m,
                               const DeflationBasis& z, std::span<const double> b,
                               ProjectionOperator choice = ProjectionOperator::A);

/// v - A_p Z E^-1 Z^T v
Vector apply_p1(const DeflationContext& ctx, std::span<const double> v);
void apply_p1_inplace(const DeflationContext& ctx, std::span<double> v);

/// v - Z E^-1 Z^T A_p v
Vector apply_p2(const DeflationContext& ctx, std::span<const double> v);

/// Maps an iterate of the deflated system back to the original unknowns.
/// For A_p = A this is x* + P2 x_hat. For A_p = A M^-1 the correction is
/// carried out on M x_hat and mapped back through M^-1.
Vector reconstruct(const DeflationContext& ctx, std::span<const double> x_hat);

}  // namespace deflate

#endif
