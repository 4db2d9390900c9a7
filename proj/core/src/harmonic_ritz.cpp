#include "deflate/harmonic_ritz.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "deflate/deflation.hpp"
#include "deflate/errors.hpp"

namespace deflate {

namespace {

HarmonicSpectrum sorted_spectrum(const Eigen::VectorXcd& thetas, const Eigen::MatrixXcd& Y) {
  std::vector<Eigen::Index> order;
  for (Eigen::Index k = 0; k < thetas.size(); ++k) {
    if (std::isfinite(thetas(k).real()) && std::isfinite(thetas(k).imag())) order.push_back(k);
  }
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return magnitude_order(thetas(a), thetas(b));
  });
  HarmonicSpectrum out;
  out.Y.resize(Y.rows(), static_cast<Eigen::Index>(order.size()));
  for (std::size_t c = 0; c < order.size(); ++c) {
    out.thetas.push_back(thetas(order[c]));
    out.Y.col(static_cast<Eigen::Index>(c)) = Y.col(order[c]);
  }
  return out;
}

void require_cycle(const ArnoldiData& data, const char* who) {
  if (data.m == 0) throw HarmonicRitzFailure(std::string(who) + ": empty cycle");
  if (data.Hbar.rows() != static_cast<Eigen::Index>(data.m + 1) ||
      data.Hbar.cols() != static_cast<Eigen::Index>(data.m)) {
    throw DimensionMismatch(std::string(who) + ": Hbar must be (m+1) x m");
  }
}

HarmonicRitzSet select(const ArnoldiData& data, const HarmonicSpectrum& spec, std::size_t d) {
  if (d == 0) throw InvalidArgument("harmonic_ritz: d must be >= 1");
  if (d > data.m) {
    throw InvalidArgument("harmonic_ritz: d=" + std::to_string(d) + " exceeds cycle length m=" +
                          std::to_string(data.m));
  }
  if (spec.thetas.size() < d) {
    throw HarmonicRitzFailure("harmonic_ritz: only " + std::to_string(spec.thetas.size()) +
                              " finite harmonic Ritz values");
  }
  const std::size_t keep = pair_closed_count(spec.thetas, d);
  const double hnorm2 = data.Hbar.squaredNorm();
  std::vector<Complex> thetas(spec.thetas.begin(), spec.thetas.begin() + static_cast<std::ptrdiff_t>(keep));
  Eigen::MatrixXcd Yc = spec.Y.leftCols(static_cast<Eigen::Index>(keep));
  for (std::size_t k = 0; k < keep; ++k) {
    Eigen::VectorXcd y = Yc.col(static_cast<Eigen::Index>(k));
    double res = petrov_galerkin_residual(data, thetas[k], y);
    if (!(res <= 1e-6 * hnorm2 * y.norm())) {
      throw HarmonicRitzFailure("harmonic_ritz: Petrov-Galerkin residual " + std::to_string(res) +
                                " too large for pair " + std::to_string(k));
    }
  }
  HarmonicRitzSet out;
  out.thetas = thetas;
  out.Y = realify(thetas, Yc);
  const std::size_t n = data.V.empty() ? 0 : data.V[0].size();
  for (Eigen::Index c = 0; c < out.Y.cols(); ++c) {
    Vector z(n, 0.0);
    for (std::size_t i = 0; i < data.m; ++i) axpy(out.Y(static_cast<Eigen::Index>(i), c), data.V[i], z);
    out.Z.push_back(std::move(z));
  }
  return out;
}

}  // namespace

HarmonicSpectrum harmonic_spectrum_a(const ArnoldiData& data) {
  require_cycle(data, "harmonic_ritz_a");
  const auto m = static_cast<Eigen::Index>(data.m);
  Eigen::MatrixXd Hm = data.H();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Hm.transpose());
  double pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(pivot > 1e-14 * Hm.norm())) throw HarmonicRitzFailure("harmonic_ritz_a: H_m is singular");
  Eigen::VectorXd em = Eigen::VectorXd::Zero(m);
  em(m - 1) = 1.0;
  Eigen::VectorXd f = lu.solve(em);
  const double h = data.subdiagonal();
  Eigen::MatrixXd K = Hm;
  K.col(m - 1) += h * h * f;
  Eigen::EigenSolver<Eigen::MatrixXd> es(K, true);
  if (es.info() != Eigen::Success) throw EigNonConvergence("harmonic_ritz_a: eigensolver failed");
  return sorted_spectrum(es.eigenvalues(), es.eigenvectors());
}

HarmonicSpectrum harmonic_spectrum_b(const ArnoldiData& data) {
  require_cycle(data, "harmonic_ritz_b");
  const auto m = static_cast<Eigen::Index>(data.m);
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;
  givens_qr(data, Q, R);
  Eigen::MatrixXd G = Q.topLeftCorner(m, m);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(R);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || !(smax > 0.0)) throw HarmonicRitzFailure("harmonic_ritz_b: R_m is singular");

  if (smax / smin < 1e12) {
    // R y = theta G y  <=>  (R^-1 G) y = (1/theta) y
    Eigen::MatrixXd K = R.triangularView<Eigen::Upper>().solve(G);
    Eigen::EigenSolver<Eigen::MatrixXd> es(K, true);
    if (es.info() != Eigen::Success) throw EigNonConvergence("harmonic_ritz_b: eigensolver failed");
    Eigen::VectorXcd mu = es.eigenvalues();
    Eigen::VectorXcd theta(mu.size());
    for (Eigen::Index k = 0; k < mu.size(); ++k) {
      theta(k) = mu(k) == Complex(0.0, 0.0)
                     ? Complex(std::numeric_limits<double>::infinity(), 0.0)
                     : Complex(1.0, 0.0) / mu(k);
    }
    return sorted_spectrum(theta, es.eigenvectors());
  }
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(R, G, true);
  if (ges.info() != Eigen::Success) {
    throw EigNonConvergence("harmonic_ritz_b: generalized eigensolver failed");
  }
  Eigen::VectorXcd theta(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    double beta = ges.betas()(k);
    theta(k) = beta == 0.0 ? Complex(std::numeric_limits<double>::infinity(), 0.0)
                           : ges.alphas()(k) / beta;
  }
  return sorted_spectrum(theta, ges.eigenvectors());
}

HarmonicRitzSet harmonic_ritz_a(const ArnoldiData& data, std::size_t d) {
  return select(data, harmonic_spectrum_a(data), d);
}

HarmonicRitzSet harmonic_ritz_b(const ArnoldiData& data, std::size_t d) {
  return select(data, harmonic_spectrum_b(data), d);
}

double petrov_galerkin_residual(const ArnoldiData& data, Complex theta,
                                const Eigen::VectorXcd& y) {
  Eigen::MatrixXcd Hb = data.Hbar.cast<Complex>();
  Eigen::MatrixXcd Hm = data.H().cast<Complex>();
  Eigen::VectorXcd r = Hb.transpose() * (Hb * y) - theta * (Hm.transpose() * y);
  return r.norm();
}

std::size_t pair_closed_count(const std::vector<Complex>& sorted, std::size_t d) {
  if (d >= sorted.size()) return sorted.size();
  if (d == 0) return 0;
  const Complex& last = sorted[d - 1];
  const Complex& next = sorted[d];
  if (last.imag() > 0.0 && std::abs(next - std::conj(last)) <= 1e-10 * std::abs(last)) {
    return d + 1;
  }
  return d;
}

Eigen::MatrixXd realify(const std::vector<Complex>& thetas, const Eigen::MatrixXcd& vectors) {
  const auto count = static_cast<Eigen::Index>(thetas.size());
  if (vectors.cols() != count) throw DimensionMismatch("realify: one vector per value required");
  Eigen::MatrixXd out(vectors.rows(), count);
  Eigen::Index k = 0;
  while (k < count) {
    const Complex t = thetas[static_cast<std::size_t>(k)];
    Eigen::VectorXcd u = vectors.col(k);
    if (t.imag() == 0.0) {
      Eigen::Index p = 0;
      u.cwiseAbs().maxCoeff(&p);
      if (std::abs(u(p)) > 0.0) u *= std::conj(u(p)) / std::abs(u(p));
      if (u.imag().norm() > 1e-8 * u.norm()) {
        throw InvalidArgument("realify: real value with a genuinely complex vector");
      }
      out.col(k) = u.real();
      ++k;
      continue;
    }
    const bool has_partner = k + 1 < count && t.imag() > 0.0 &&
                             std::abs(thetas[static_cast<std::size_t>(k + 1)] - std::conj(t)) <=
                                 1e-10 * std::abs(t);
    if (!has_partner) {
      throw InvalidArgument("realify: complex value " + std::to_string(t.real()) + "+" +
                            std::to_string(t.imag()) + "i has no conjugate partner");
    }
    Eigen::VectorXcd v = vectors.col(k + 1);
    Complex overlap = u.conjugate().dot(v);  // sum u_i v_i
    if (std::abs(overlap) < (1.0 - 1e-10) * u.norm() * v.norm()) {
      throw InvalidArgument("realify: eigenvectors of a conjugate pair are not conjugate");
    }
    out.col(k) = u.real();
    out.col(k + 1) = -u.imag();
    k += 2;
  }
  for (Eigen::Index c = 0; c < count; ++c) {
    double nrm = out.col(c).norm();
    if (nrm > 0.0) out.col(c) /= nrm;
  }
  return out;
}

SolveReport rdgmres(const SparseMatrix& a, std::span<const double> b,
                    std::span<const double> x0, const Preconditioner& m,
                    const RdgmresOptions& opts) {
  if (opts.d == 0) throw InvalidArgument("rdgmres: d must be >= 1");
  if (opts.d > opts.gmres.restart) {
    throw InvalidArgument("rdgmres: d=" + std::to_string(opts.d) + " exceeds m=" +
                          std::to_string(opts.gmres.restart));
  }
  std::optional<DeflationContext> frozen;
  bool tried = false;
  std::string warning;
  double setup_ms = 0.0;
  std::vector<Complex> thetas;

  GmresOptions gopts = opts.gmres;
  CycleHook user_hook = opts.gmres.on_cycle_end;
  gopts.on_cycle_end = [&](const ArnoldiData& data, std::size_t cycle,
                           const DeflationContext* active) -> const DeflationContext* {
    const DeflationContext* next = nullptr;
    if (!tried && data.m < opts.d) {
      tried = true;
      warning = "first cycle shorter than d, continuing undeflated";
    } else if (!tried) {
      tried = true;
      auto t0 = std::chrono::steady_clock::now();
      try {
        HarmonicRitzSet set = opts.formulation == HarmonicFormulation::A
                                  ? harmonic_ritz_a(data, opts.d)
                                  : harmonic_ritz_b(data, opts.d);
        DeflationBasis z = DeflationBasis::from_columns(a.n(), set.Z);
        frozen.emplace(build_context(a, m, z, b, ProjectionOperator::A));
        thetas = set.thetas;
        next = &*frozen;
      } catch (const HarmonicRitzFailure& e) {
        warning = std::string("harmonic Ritz extraction failed, continuing undeflated: ") + e.what();
      } catch (const SingularCoarseMatrix& e) {
        warning = std::string("coarse matrix singular, continuing undeflated: ") + e.what();
      }
      setup_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                     .count();
    }
    if (user_hook) user_hook(data, cycle, next != nullptr ? next : active);
    return next;
  };
  SolveReport rep = gmres(a, b, x0, m, gopts, nullptr);
  rep.warning = warning;
  rep.setup_ms = setup_ms;
  rep.deflation_thetas = thetas;
  return rep;
}

}  // namespace deflate
