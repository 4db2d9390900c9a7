#ifndef DEFLATE_TEST_HELPERS_HPP
#define DEFLATE_TEST_HELPERS_HPP

#include <cmath>
#include <random>
#include <vector>

#include "deflate/dense.hpp"
#include "deflate/sparse.hpp"

namespace testutil {

using deflate::DenseMatrix;
using deflate::SparseMatrix;
using deflate::Vector;

inline Vector random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

/// Random sparse matrix with the given fill, plus `shift` on the diagonal.
inline SparseMatrix random_sparse(std::mt19937_64& rng, std::size_t n, double fill,
                                  double shift = 0.0) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<deflate::Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || coin(rng) < fill) t.push_back({i, j, val(rng) + (i == j ? shift : 0.0)});
    }
  }
  return SparseMatrix::from_triplets(n, std::move(t));
}

inline Eigen::VectorXd as_eigen(const Vector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Vector as_vector(const Eigen::VectorXd& v) { return Vector(v.data(), v.data() + v.size()); }

inline double rel_diff(const Vector& a, const Vector& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num) / (den > 0.0 ? std::sqrt(den) : 1.0);
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline Vector residual(const SparseMatrix& a, const Vector& b, const Vector& x) {
  Vector r = deflate::spmv(a, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

}  // namespace testutil

#endif
