#ifndef DEFLATE_KRYLOV_HPP
#define DEFLATE_KRYLOV_HPP

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "deflate/dense.hpp"
#include "deflate/preconditioner.hpp"
#include "deflate/sparse.hpp"

namespace deflate {

struct DeflationContext;

/// Arnoldi basis and Hessenberg matrix of one GMRES cycle.
struct ArnoldiData {
  /// m+1 basis vectors. After a happy breakdown the last one is zero.
  std::vector<Vector> V;
  /// (m+1) x m, as produced by Gram-Schmidt, before any rotation.
  Eigen::MatrixXd Hbar;
  std::size_t m = 0;
  /// Givens rotations applied to Hbar, in order.
  Eigen::VectorXd cs;
  Eigen::VectorXd sn;
  bool breakdown = false;

  /// Square H_m (first m rows of Hbar).
  Eigen::MatrixXd H() const { return Hbar.topRows(static_cast<Eigen::Index>(m)); }
  double subdiagonal() const {
    return m == 0 ? 0.0 : Hbar(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m - 1));
  }
};

/// Rebuilds (Q, R) of Hbar from the stored rotations: Q Hbar = [R; 0].
/// Q is (m+1) x (m+1), R is m x m upper triangular.
void givens_qr(const ArnoldiData& data, Eigen::MatrixXd& Q, Eigen::MatrixXd& R);

/// Eigenvalues of H_m sorted by magnitude.
std::vector<Complex> ritz_values(const ArnoldiData& data);

/// Smallest Ritz values of one Arnoldi step.
struct RitzStep {
  std::size_t cycle = 0;
  /// Basis size at this step (1-based within the cycle).
  std::size_t k = 0;
  std::vector<Complex> values;
};

/// Called after every cycle that neither converged nor used up max_iters.
/// Returning a context switches the remaining cycles to that deflation; the
/// caller keeps it alive.
using CycleHook =
    std::function<const DeflationContext*(const ArnoldiData&, std::size_t cycle,
                                          const DeflationContext* active)>;

struct GmresOptions {
  std::size_t restart = 30;
  double tol = 1e-6;
  std::size_t max_iters = 1000;
  std::size_t min_iters = 0;
  /// Number of smallest Ritz values recorded per Arnoldi step (0 = none).
  std::size_t ritz_keep = 0;
  CycleHook on_cycle_end;
};

struct SolveReport {
  Vector x;
  /// Residual norm per iteration, absolute; entry 0 is the initial one.
  std::vector<double> residual_history;
  std::vector<std::size_t> cycle_of_iter;
  std::vector<bool> deflated_of_iter;
  /// Explicit residual at the start of every cycle plus the final one.
  std::vector<double> cycle_start_residuals;
  std::vector<RitzStep> ritz_trace;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  bool converged = false;
  /// ||b - A x0||, the convergence reference.
  double initial_residual = 0.0;
  /// ||b - A x|| for the returned x.
  double final_residual = 0.0;
  std::string warning;
  /// Dimension of the deflation space in use at the end (0 when none).
  std::size_t deflation_dim = 0;
  /// Harmonic Ritz values behind an extracted basis, if any.
  std::vector<Complex> deflation_thetas;
  double setup_ms = 0.0;
  double solve_ms = 0.0;

  double relative_residual() const {
    return initial_residual > 0.0 ? final_residual / initial_residual : 0.0;
  }
};

/// w = P1 A M^-1 v, or A M^-1 v without deflation.
void apply_operator(const SparseMatrix& a, const Preconditioner& m,
                    const DeflationContext* ctx, std::span<const double> v,
                    std::span<double> w, std::span<double> work);

/// Restarted right-preconditioned GMRES(m). With an active context the cycles
/// run on the deflated operator and x is reconstructed at the end.
SolveReport gmres(const SparseMatrix& a, std::span<const double> b, std::span<const double> x0,
                  const Preconditioner& m, const GmresOptions& opts,
                  const DeflationContext* deflation = nullptr);

}  // namespace deflate

#endif
