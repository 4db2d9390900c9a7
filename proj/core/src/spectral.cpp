#include "deflate/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "deflate/errors.hpp"
#include "deflate/io.hpp"

namespace deflate {

namespace {

void check_size(const SparseMatrix& a, std::size_t max_n) {
  if (a.n() > max_n) {
    throw InvalidArgument("spectrum: n=" + std::to_string(a.n()) + " exceeds the dense limit of " +
                          std::to_string(max_n) + "; extract a smaller submatrix first");
  }
}

}  // namespace

SpectrumReport recount(SpectrumReport report, double cutoff) {
  report.cutoff = cutoff;
  const auto& ev = report.eigenvalues;
  report.n_small = static_cast<std::size_t>(
      std::count_if(ev.begin(), ev.end(), [&](const Complex& z) { return std::abs(z) <= cutoff; }));
  if (report.n_small == 0 || report.n_small >= ev.size()) {
    report.gap_ratio = std::numeric_limits<double>::quiet_NaN();
  } else {
    report.gap_ratio = std::abs(ev[report.n_small]) / std::abs(ev[report.n_small - 1]);
  }
  return report;
}

SpectrumReport spectrum(const SparseMatrix& a, double cutoff, std::size_t max_n) {
  check_size(a, max_n);
  SpectrumReport r;
  r.eigenvalues = dense_eig(to_dense(a)).values;
  return recount(std::move(r), cutoff);
}

EigenDecomposition smallest_eigenpairs(const SparseMatrix& a, std::size_t count,
                                       std::size_t max_n) {
  check_size(a, max_n);
  EigenDecomposition all = dense_eig(to_dense(a), true);
  count = std::min(count, all.values.size());
  EigenDecomposition out;
  out.values.assign(all.values.begin(), all.values.begin() + static_cast<std::ptrdiff_t>(count));
  out.vectors = all.vectors.leftCols(static_cast<Eigen::Index>(count));
  return out;
}

double subspace_angle(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DimensionMismatch("subspace_angle: length mismatch");
  double nu = norm2(u);
  double nv = norm2(v);
  if (nu == 0.0 || nv == 0.0) throw InvalidArgument("subspace_angle: zero vector");
  return std::min(1.0, std::abs(dot(u, v)) / (nu * nv));
}

double subspace_overlap(std::span<const double> u, const std::vector<Vector>& basis) {
  const double nu = norm2(u);
  if (nu == 0.0) throw InvalidArgument("subspace_overlap: zero vector");
  if (basis.empty()) return 0.0;
  const auto n = static_cast<Eigen::Index>(u.size());
  Eigen::MatrixXd B(n, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (basis[j].size() != u.size()) throw DimensionMismatch("subspace_overlap: length mismatch");
    B.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(basis[j].data(), n);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, B.cols());
  Eigen::VectorXd coeff = Q.transpose() * Eigen::Map<const Eigen::VectorXd>(u.data(), n);
  return std::min(1.0, coeff.norm() / nu);
}

std::vector<Match> greedy_match(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  std::vector<Match> all;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) all.push_back({i, j, subspace_angle(a[i], b[j])});
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Match& x, const Match& y) { return x.cosine > y.cosine; });
  std::vector<char> used_a(a.size(), 0);
  std::vector<char> used_b(b.size(), 0);
  std::vector<Match> out;
  for (const auto& m : all) {
    if (used_a[m.first] || used_b[m.second]) continue;
    used_a[m.first] = used_b[m.second] = 1;
    out.push_back(m);
  }
  return out;
}

void write_spectrum_csv(std::ostream& out, const SpectrumReport& report) {
  out << "index,re,im,abs\n";
  for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
    const Complex& z = report.eigenvalues[i];
    out << i << ',' << io::format_double(z.real()) << ',' << io::format_double(z.imag()) << ','
        << io::format_double(std::abs(z)) << '\n';
  }
}

}  // namespace deflate
