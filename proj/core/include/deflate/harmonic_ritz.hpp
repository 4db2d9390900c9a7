#ifndef DEFLATE_HARMONIC_RITZ_HPP
#define DEFLATE_HARMONIC_RITZ_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "deflate/dense.hpp"
#include "deflate/krylov.hpp"

namespace deflate {

/// Harmonic Ritz pairs selected for deflation. Y and Z are real (realified).
struct HarmonicRitzSet {
  std::vector<Complex> thetas;
  /// m x d coefficient block.
  Eigen::MatrixXd Y;
  /// z_k = V_m y_k
  std::vector<Vector> Z;

  std::size_t d() const { return Z.size(); }
};

/// All harmonic Ritz values with their complex coefficient vectors, sorted
/// by magnitude (infinite values dropped).
struct HarmonicSpectrum {
  std::vector<Complex> thetas;
  Eigen::MatrixXcd Y;
};

/// (H_m + h^2 H_m^-T e_m e_m^T) y = theta y
HarmonicSpectrum harmonic_spectrum_a(const ArnoldiData& data);
/// R_m y = theta G y, G the leading m x m block of the rotation product Q.
HarmonicSpectrum harmonic_spectrum_b(const ArnoldiData& data);

HarmonicRitzSet harmonic_ritz_a(const ArnoldiData& data, std::size_t d);
HarmonicRitzSet harmonic_ritz_b(const ArnoldiData& data, std::size_t d);

/// || Hbar^T Hbar y - theta H_m^T y ||, i.e. (A V_m)^T (A z - theta z) in
/// coordinates.
double petrov_galerkin_residual(const ArnoldiData& data, Complex theta,
                                const Eigen::VectorXcd& y);

/// Number of leading entries of a magnitude-sorted list to keep so that a
/// conjugate pair is never split.
std::size_t pair_closed_count(const std::vector<Complex>& sorted, std::size_t d);

/// Real basis from eigenvectors. Conjugate pairs (u, conj u), positive
/// imaginary part first, become (Re u, -Im u); real ones are phase-aligned.
/// Throws InvalidArgument for a complex vector without a partner.
Eigen::MatrixXd realify(const std::vector<Complex>& thetas, const Eigen::MatrixXcd& vectors);

enum class HarmonicFormulation { A, B };

struct RdgmresOptions {
  GmresOptions gmres;
  std::size_t d = 1;
  HarmonicFormulation formulation = HarmonicFormulation::B;
};

/// GMRES(m) whose first restart extracts d harmonic Ritz vectors, freezes a
/// deflation context with A_p = A and continues deflated. Falls back to
/// plain GMRES (with report.warning set) if extraction fails.
SolveReport rdgmres(const SparseMatrix& a, std::span<const double> b,
                    std::span<const double> x0, const Preconditioner& m,
                    const RdgmresOptions& opts);

}  // namespace deflate

#endif
