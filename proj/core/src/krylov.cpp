#include "deflate/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "deflate/deflation.hpp"
#include "deflate/errors.hpp"

namespace deflate {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void residual(const SparseMatrix& a, std::span<const double> b, std::span<const double> x,
              std::span<double> r) {
  a.multiply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
}

// Stable plane rotation zeroing b in (a, b).
void make_rotation(double a, double b, double& c, double& s) {
  if (b == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  double h = std::hypot(a, b);
  c = a / h;
  s = b / h;
}

}  // namespace

void givens_qr(const ArnoldiData& data, Eigen::MatrixXd& Q, Eigen::MatrixXd& R) {
  const auto m = static_cast<Eigen::Index>(data.m);
  Q = Eigen::MatrixXd::Identity(m + 1, m + 1);
  Eigen::MatrixXd H = data.Hbar.leftCols(m).topRows(m + 1);
  for (Eigen::Index j = 0; j < m; ++j) {
    double c = data.cs(j);
    double s = data.sn(j);
    for (Eigen::Index col = 0; col < m; ++col) {
      double x = H(j, col);
      double y = H(j + 1, col);
      H(j, col) = c * x + s * y;
      H(j + 1, col) = -s * x + c * y;
    }
    for (Eigen::Index col = 0; col < m + 1; ++col) {
      double x = Q(j, col);
      double y = Q(j + 1, col);
      Q(j, col) = c * x + s * y;
      Q(j + 1, col) = -s * x + c * y;
    }
  }
  R = H.topRows(m).triangularView<Eigen::Upper>();
}

std::vector<Complex> ritz_values(const ArnoldiData& data) {
  if (data.m == 0) throw InvalidArgument("ritz_values: empty cycle");
  return dense_eig(DenseMatrix(data.H())).values;
}

void apply_operator(const SparseMatrix& a, const Preconditioner& m,
                    const DeflationContext* ctx, std::span<const double> v,
                    std::span<double> w, std::span<double> work) {
  m.apply(v, work);
  a.multiply(work, w);
  if (ctx != nullptr && ctx->active()) apply_p1_inplace(*ctx, w);
}

SolveReport gmres(const SparseMatrix& a, std::span<const double> b, std::span<const double> x0,
                  const Preconditioner& m, const GmresOptions& opts,
                  const DeflationContext* deflation) {
  const auto t_start = Clock::now();
  const std::size_t n = a.n();
  if (b.size() != n) throw DimensionMismatch("gmres: rhs length mismatch");
  if (!x0.empty() && x0.size() != n) throw DimensionMismatch("gmres: x0 length mismatch");
  if (m.n() != n) throw DimensionMismatch("gmres: preconditioner size mismatch");
  if (opts.restart == 0) throw InvalidArgument("gmres: restart length must be >= 1");
  if (!(opts.tol > 0.0)) throw InvalidArgument("gmres: tol must be positive");
  if (deflation != nullptr && deflation->n() != n) {
    throw DimensionMismatch("gmres: deflation context size mismatch");
  }

  SolveReport rep;
  Vector xhat = x0.empty() ? Vector(n, 0.0) : Vector(x0.begin(), x0.end());
  Vector r(n), w(n), work(n);
  const DeflationContext* ctx = (deflation != nullptr && deflation->active()) ? deflation : nullptr;

  residual(a, b, xhat, r);
  rep.initial_residual = norm2(r);
  const double target = opts.tol * rep.initial_residual;

  const std::size_t mmax = opts.restart;
  ArnoldiData data;
  data.V.assign(mmax + 1, Vector(n, 0.0));
  Eigen::MatrixXd Hr(mmax + 1, mmax);
  Eigen::VectorXd g(mmax + 1);
  std::size_t cycle = 0;

  while (true) {
    residual(a, b, xhat, r);
    if (ctx != nullptr) apply_p1_inplace(*ctx, r);
    const double beta = norm2(r);
    rep.cycle_start_residuals.push_back(beta);
    if (rep.residual_history.empty()) {
      rep.residual_history.push_back(beta);
      rep.cycle_of_iter.push_back(0);
      rep.deflated_of_iter.push_back(ctx != nullptr);
    }
    if (beta == 0.0 || (beta <= target && rep.iterations >= opts.min_iters)) {
      rep.converged = true;
      break;
    }
    if (rep.iterations >= opts.max_iters) break;

    data.Hbar.setZero(mmax + 1, mmax);
    data.cs.setZero(mmax);
    data.sn.setZero(mmax);
    data.breakdown = false;
    Hr.setZero();
    g.setZero();
    g(0) = beta;
    for (std::size_t i = 0; i < n; ++i) data.V[0][i] = r[i] / beta;

    std::size_t k = 0;
    bool finished = false;
    while (k < mmax && rep.iterations < opts.max_iters) {
      const auto j = static_cast<Eigen::Index>(k);
      apply_operator(a, m, ctx, data.V[k], w, work);
      const double wnorm0 = norm2(w);

      for (std::size_t i = 0; i <= k; ++i) {
        double h = dot(data.V[i], w);
        data.Hbar(static_cast<Eigen::Index>(i), j) = h;
        axpy(-h, data.V[i], w);
      }
      double wnorm = norm2(w);
      if (wnorm > 0.0) {
        double loss = 0.0;
        for (std::size_t i = 0; i <= k; ++i) loss = std::max(loss, std::abs(dot(data.V[i], w)));
        if (loss > 1e-8 * wnorm) {
          for (std::size_t i = 0; i <= k; ++i) {
            double h = dot(data.V[i], w);
            data.Hbar(static_cast<Eigen::Index>(i), j) += h;
            axpy(-h, data.V[i], w);
          }
          wnorm = norm2(w);
        }
      }
      const bool breakdown = !(wnorm > 1e-13 * wnorm0);
      data.Hbar(j + 1, j) = breakdown ? 0.0 : wnorm;

      Hr.col(j) = data.Hbar.col(j);
      for (Eigen::Index i = 0; i < j; ++i) {
        double x = Hr(i, j);
        double y = Hr(i + 1, j);
        Hr(i, j) = data.cs(i) * x + data.sn(i) * y;
        Hr(i + 1, j) = -data.sn(i) * x + data.cs(i) * y;
      }
      double c = 1.0;
      double s = 0.0;
      make_rotation(Hr(j, j), Hr(j + 1, j), c, s);
      data.cs(j) = c;
      data.sn(j) = s;
      Hr(j, j) = c * Hr(j, j) + s * Hr(j + 1, j);
      Hr(j + 1, j) = 0.0;
      g(j + 1) = -s * g(j);
      g(j) = c * g(j);

      ++k;
      ++rep.iterations;
      const double res = std::abs(g(j + 1));
      rep.residual_history.push_back(res);
      rep.cycle_of_iter.push_back(cycle);
      rep.deflated_of_iter.push_back(ctx != nullptr);

      if (opts.ritz_keep > 0) {
        auto kk = static_cast<Eigen::Index>(k);
        DenseMatrix hk = data.Hbar.topLeftCorner(kk, kk);
        auto vals = dense_eig(hk).values;
        if (vals.size() > opts.ritz_keep) vals.resize(opts.ritz_keep);
        rep.ritz_trace.push_back({cycle, k, std::move(vals)});
      }

      if (breakdown) {
        std::fill(data.V[k].begin(), data.V[k].end(), 0.0);
        data.breakdown = true;
        finished = true;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) data.V[k][i] = w[i] / wnorm;
      if (res <= target && rep.iterations >= opts.min_iters) {
        finished = true;
        break;
      }
    }
    if (rep.iterations >= opts.max_iters) finished = true;

    // Back substitution on the rotated triangle, then x_hat += M^-1 V y.
    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::VectorXd y = g.head(kk);
    for (Eigen::Index i = kk - 1; i >= 0; --i) {
      for (Eigen::Index l = i + 1; l < kk; ++l) y(i) -= Hr(i, l) * y(l);
      y(i) /= Hr(i, i);
    }
    std::fill(work.begin(), work.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i) axpy(y(static_cast<Eigen::Index>(i)), data.V[i], work);
    m.apply(work, w);
    axpy(1.0, w, xhat);

    data.m = k;
    if (opts.on_cycle_end && !finished) {
      ArnoldiData view;
      view.m = k;
      view.V.assign(data.V.begin(), data.V.begin() + static_cast<std::ptrdiff_t>(k + 1));
      view.Hbar = data.Hbar.topLeftCorner(kk + 1, kk);
      view.cs = data.cs.head(kk);
      view.sn = data.sn.head(kk);
      view.breakdown = data.breakdown;
      const DeflationContext* next = opts.on_cycle_end(view, cycle, ctx);
      if (next != nullptr && next != ctx) {
        if (next->n() != n) throw DimensionMismatch("gmres: hook context size mismatch");
        ctx = next->active() ? next : nullptr;
      }
    }
    ++cycle;
  }
  rep.restarts = cycle == 0 ? 0 : cycle - 1;

  rep.deflation_dim = ctx != nullptr ? ctx->d() : 0;
  rep.x = ctx != nullptr ? reconstruct(*ctx, xhat) : std::move(xhat);
  residual(a, b, rep.x, r);
  rep.final_residual = norm2(r);
  rep.solve_ms = ms_since(t_start);
  return rep;
}

}  // namespace deflate
