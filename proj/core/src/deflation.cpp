#include "deflate/deflation.hpp"

#include <string>

#include "deflate/errors.hpp"

namespace deflate {

DeflationBasis DeflationBasis::from_columns(std::size_t n, const std::vector<Vector>& columns) {
  DeflationBasis z(n);
  for (const auto& c : columns) z.add_dense(c);
  return z;
}

DeflationBasis DeflationBasis::from_dense(std::size_t n, std::size_t d,
                                          std::span<const double> values) {
  if (values.size() != n * d) throw DimensionMismatch("DeflationBasis: expected n*d values");
  DeflationBasis z(n);
  for (std::size_t j = 0; j < d; ++j) {
    Vector c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = values[i * d + j];
    z.add_dense(std::move(c));
  }
  return z;
}

void DeflationBasis::add_dense(Vector column) {
  if (column.size() != n_) {
    throw DimensionMismatch("DeflationBasis: column length " + std::to_string(column.size()) +
                            " != " + std::to_string(n_));
  }
  columns_.push_back({{}, std::move(column)});
}

void DeflationBasis::add_sparse(std::vector<std::size_t> index, Vector value) {
  if (index.size() != value.size()) throw DimensionMismatch("DeflationBasis: index/value length");
  if (index.empty()) throw InvalidArgument("DeflationBasis: empty sparse column");
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= n_ || (k > 0 && index[k] <= index[k - 1])) {
      throw InvalidArgument("DeflationBasis: sparse indices must be increasing and < n");
    }
  }
  columns_.push_back({std::move(index), std::move(value)});
}

void DeflationBasis::add_compressed(std::span<const double> column) {
  if (column.size() != n_) throw DimensionMismatch("DeflationBasis: column length");
  std::vector<std::size_t> idx;
  Vector val;
  for (std::size_t i = 0; i < n_; ++i) {
    if (column[i] != 0.0) {
      idx.push_back(i);
      val.push_back(column[i]);
    }
  }
  if (idx.size() * 2 > n_ || idx.empty()) {
    columns_.push_back({{}, Vector(column.begin(), column.end())});
  } else {
    columns_.push_back({std::move(idx), std::move(val)});
  }
}

Vector DeflationBasis::dense_column(std::size_t j) const {
  const Column& c = columns_.at(j);
  if (c.dense()) return c.value;
  Vector out(n_, 0.0);
  for (std::size_t k = 0; k < c.index.size(); ++k) out[c.index[k]] = c.value[k];
  return out;
}

std::size_t DeflationBasis::stored_entries() const {
  std::size_t total = 0;
  for (const auto& c : columns_) total += c.value.size();
  return total;
}

double DeflationBasis::dot(std::size_t j, std::span<const double> v) const {
  const Column& c = columns_[j];
  double s = 0.0;
  if (c.dense()) {
    for (std::size_t i = 0; i < n_; ++i) s += c.value[i] * v[i];
  } else {
    for (std::size_t k = 0; k < c.index.size(); ++k) s += c.value[k] * v[c.index[k]];
  }
  return s;
}

void DeflationBasis::axpy(std::size_t j, double alpha, std::span<double> y) const {
  const Column& c = columns_[j];
  if (c.dense()) {
    for (std::size_t i = 0; i < n_; ++i) y[i] += alpha * c.value[i];
  } else {
    for (std::size_t k = 0; k < c.index.size(); ++k) y[c.index[k]] += alpha * c.value[k];
  }
}

Vector DeflationBasis::transpose_apply(std::span<const double> v) const {
  if (v.size() != n_) throw DimensionMismatch("Z^T v: length mismatch");
  Vector out(d());
  for (std::size_t j = 0; j < d(); ++j) out[j] = dot(j, v);
  return out;
}

void DeflationBasis::apply_add(std::span<const double> c, std::span<double> y) const {
  if (c.size() != d() || y.size() != n_) throw DimensionMismatch("Z c: length mismatch");
  for (std::size_t j = 0; j < d(); ++j) axpy(j, c[j], y);
}

DeflationContext DeflationContext::none(const SparseMatrix& a) {
  DeflationContext ctx;
  ctx.A = a;
  ctx.M = Preconditioner::identity(a.n());
  ctx.Z = DeflationBasis(a.n());
  ctx.AZ = DeflationBasis(a.n());
  ctx.x_star.assign(a.n(), 0.0);
  return ctx;
}

DeflationContext build_context(const SparseMatrix& a, const Preconditioner& m,
                               const DeflationBasis& z, std::span<const double> b,
                               ProjectionOperator choice) {
  const std::size_t n = a.n();
  if (z.n() != n) throw DimensionMismatch("build_context: Z has wrong row count");
  if (b.size() != n) throw DimensionMismatch("build_context: rhs length mismatch");
  if (m.n() != n) throw DimensionMismatch("build_context: preconditioner size mismatch");
  if (z.d() == 0) throw InvalidArgument("build_context: empty deflation basis");

  DeflationContext ctx;
  ctx.A = a;
  ctx.M = m;
  ctx.choice = choice;
  ctx.Z = z;
  ctx.AZ = DeflationBasis(n);
  const std::size_t d = z.d();
  Vector col(n);
  Vector tmp(n);
  for (std::size_t j = 0; j < d; ++j) {
    Vector zj = z.dense_column(j);
    if (choice == ProjectionOperator::APreconditioned) {
      m.apply(zj, tmp);
      a.multiply(tmp, col);
    } else {
      a.multiply(zj, col);
    }
    ctx.AZ.add_compressed(col);
  }

  ctx.E = DenseMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    Vector azj = ctx.AZ.dense_column(j);
    for (std::size_t i = 0; i < d; ++i) {
      ctx.E(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = z.dot(i, azj);
    }
  }
  double enorm = ctx.E.norm();
  if (!(enorm > 0.0) || !ctx.E.allFinite()) {
    throw SingularCoarseMatrix("build_context: coarse matrix E is zero or not finite");
  }
  ctx.E_lu = dense_lu(ctx.E, 1e-12 * enorm);

  ctx.ztb = z.transpose_apply(b);
  Vector coarse = ctx.E_lu.solve(ctx.ztb);
  ctx.x_star.assign(n, 0.0);
  z.apply_add(coarse, ctx.x_star);
  return ctx;
}

void apply_p1_inplace(const DeflationContext& ctx, std::span<double> v) {
  if (v.size() != ctx.n()) throw DimensionMismatch("apply_p1: length mismatch");
  if (!ctx.active()) return;
  Vector c = ctx.E_lu.solve(ctx.Z.transpose_apply(v));
  for (std::size_t j = 0; j < c.size(); ++j) ctx.AZ.axpy(j, -c[j], v);
}

Vector apply_p1(const DeflationContext& ctx, std::span<const double> v) {
  Vector out(v.begin(), v.end());
  apply_p1_inplace(ctx, out);
  return out;
}

namespace {

Vector apply_ap(const DeflationContext& ctx, std::span<const double> v) {
  if (ctx.choice == ProjectionOperator::APreconditioned) return spmv(ctx.A, ctx.M.apply(v));
  return spmv(ctx.A, v);
}

}  // namespace

Vector apply_p2(const DeflationContext& ctx, std::span<const double> v) {
  if (v.size() != ctx.n()) throw DimensionMismatch("apply_p2: length mismatch");
  Vector out(v.begin(), v.end());
  if (!ctx.active()) return out;
  Vector c = ctx.E_lu.solve(ctx.Z.transpose_apply(apply_ap(ctx, v)));
  for (std::size_t j = 0; j < c.size(); ++j) ctx.Z.axpy(j, -c[j], out);
  return out;
}

Vector reconstruct(const DeflationContext& ctx, std::span<const double> x_hat) {
  if (x_hat.size() != ctx.n()) throw DimensionMismatch("reconstruct: length mismatch");
  if (!ctx.active()) return Vector(x_hat.begin(), x_hat.end());
  if (ctx.choice == ProjectionOperator::A) {
    Vector x = apply_p2(ctx, x_hat);
    axpy(1.0, ctx.x_star, x);
    return x;
  }
  // x = x_hat + M^-1 Z E^-1 Z^T (b - A x_hat)
  Vector ax = spmv(ctx.A, x_hat);
  Vector rhs = ctx.ztb;
  Vector ztax = ctx.Z.transpose_apply(ax);
  for (std::size_t j = 0; j < rhs.size(); ++j) rhs[j] -= ztax[j];
  Vector c = ctx.E_lu.solve(rhs);
  Vector corr(ctx.n(), 0.0);
  ctx.Z.apply_add(c, corr);
  Vector x(x_hat.begin(), x_hat.end());
  axpy(1.0, ctx.M.apply(corr), x);
  return x;
}

}  // namespace deflate
