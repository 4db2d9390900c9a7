#include "deflate/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deflate/errors.hpp"

namespace deflate {

SparseMatrix::SparseMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices, Vector values)
    : n_(n),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (row_offsets_.size() != n_ + 1 || row_offsets_.front() != 0) {
    throw InvalidArgument("CSR row_offsets must have length n+1 and start at 0");
  }
  if (col_indices_.size() != values_.size() || row_offsets_.back() != values_.size()) {
    throw InvalidArgument("CSR row_offsets[n] must equal the number of stored values");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (row_offsets_[i] > row_offsets_[i + 1]) {
      throw InvalidArgument("CSR row_offsets must be nondecreasing");
    }
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      if (col_indices_[p] >= n_) {
        throw InvalidArgument("CSR column index out of range in row " + std::to_string(i));
      }
      if (p > row_offsets_[i] && col_indices_[p] <= col_indices_[p - 1]) {
        throw InvalidArgument("CSR column indices must be strictly increasing in row " +
                              std::to_string(i));
      }
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t n, std::vector<Triplet> entries) {
  for (const auto& e : entries) {
    if (e.row >= n || e.col >= n) throw InvalidArgument("triplet index out of range");
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::size_t> cols;
  Vector vals;
  cols.reserve(entries.size());
  vals.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (k > 0 && entries[k - 1].row == e.row && entries[k - 1].col == e.col) {
      vals.back() += e.value;
      continue;
    }
    cols.push_back(e.col);
    vals.push_back(e.value);
    ++offsets[e.row + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  return SparseMatrix(n, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> offsets(n + 1);
  std::vector<std::size_t> cols(n);
  for (std::size_t i = 0; i <= n; ++i) offsets[i] = i;
  for (std::size_t i = 0; i < n; ++i) cols[i] = i;
  return SparseMatrix(n, std::move(offsets), std::move(cols), Vector(n, 1.0));
}

SparseMatrix SparseMatrix::from_dense(std::size_t n, std::span<const double> values) {
  if (values.size() != n * n) throw DimensionMismatch("from_dense: expected n*n values");
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::size_t> cols;
  Vector vals;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double v = values[i * n + j];
      if (v != 0.0) {
        cols.push_back(j);
        vals.push_back(v);
      }
    }
    offsets[i + 1] = vals.size();
  }
  return SparseMatrix(n, std::move(offsets), std::move(cols), std::move(vals));
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw InvalidArgument("SparseMatrix::at index out of range");
  auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
  auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

Vector SparseMatrix::diagonal() const {
  Vector d(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) d[i] = at(i, i);
  return d;
}

Vector SparseMatrix::to_dense() const {
  Vector dense(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      dense[i * n_ + col_indices_[p]] = values_[p];
    }
  }
  return dense;
}

double SparseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) {
    throw DimensionMismatch("spmv: vector length " + std::to_string(x.size()) +
                            " does not match matrix dimension " + std::to_string(n_));
  }
  const std::size_t* offsets = row_offsets_.data();
  const std::size_t* cols = col_indices_.data();
  const double* vals = values_.data();
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) s += vals[p] * x[cols[p]];
    y[i] = s;
  }
}

Vector spmv(const SparseMatrix& a, std::span<const double> x) {
  Vector y(a.n());
  a.multiply(x, y);
  return y;
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(double alpha, std::span<double> x) {
  for (double& v : x) v *= alpha;
}

}  // namespace deflate
