// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "deflate/bench.hpp"
#include "deflate/cases.hpp"
#include "deflate/deflation.hpp"
#include "deflate/harmonic_ritz.hpp"
#include "deflate/krylov.hpp"
#include "deflate/physics.hpp"
#include "deflate/spectral.hpp"

using namespace deflate;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void run(const std::string& name, const std::function<bool(std::ostringstream&)>& fn) {
  std::ostringstream detail;
  bool ok = false;
  try {
    ok = fn(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  report(name, ok, detail.str());
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Vector random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = u(rng);
  return v;
}

SparseMatrix random_sparse(std::mt19937_64& rng, std::size_t n, double fill, double shift) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i == j || coin(rng) < fill) t.push_back({i, j, val(rng) + (i == j ? shift : 0.0)});
  return SparseMatrix::from_triplets(n, std::move(t));
}

double rel(const Vector& a, const Vector& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

GmresOptions options(std::size_t m, std::size_t max_iters) {
  GmresOptions o;
  o.restart = m;
  o.tol = 1e-6;
  o.max_iters = max_iters;
  return o;
}

ArnoldiData first_cycle(const SparseMatrix& a, const Vector& b, std::size_t m) {
  GmresOptions o = options(m, 2 * m);
  o.tol = 1e-300;
  ArnoldiData out;
  o.on_cycle_end = [&](const ArnoldiData& data, std::size_t cycle, const DeflationContext* ctx) {
    if (cycle == 0) out = data;
    return ctx;
  };
  gmres(a, b, {}, Preconditioner::identity(a.n()), o);
  return out;
}

/// A = S D S^-1 with three small real eigenvalues.
SparseMatrix similar_to_diagonal(std::mt19937_64& rng, std::size_t n) {
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(N, N);
  std::uniform_real_distribution<double> off(-0.3, 0.3);
  std::uniform_real_distribution<double> big(1.0, 10.0);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j)
      if (i != j) s(i, j) = off(rng) / std::sqrt(double(n));
  Eigen::VectorXd d(N);
  for (Eigen::Index i = 0; i < N; ++i) d(i) = big(rng);
  d(0) = 1e-3;
  d(1) = 3e-3;
  d(2) = -5e-3;
  DenseMatrix a = s * d.asDiagonal() * s.inverse();
  return SparseMatrix::from_dense(n, std::span<const double>(a.data(), static_cast<std::size_t>(a.size())));
}

bool re_im(const Complex& a, const Complex& b) {
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

}  // namespace

int main() {
  run("theorem-3.1-counting", [](std::ostringstream& d) {
    auto t0 = Clock::now();
    bool ok = true;
    for (double eps : {1e-5, 1e-7}) {
      for (std::size_t L : {1, 2, 3}) {
        auto p = cases::assemble(cases::alternating_stack(L, eps));
        auto s = spectrum(p.A, 100.0 * eps);
        bool rest = std::abs(s.eigenvalues[L]) >= 0.01;
        d << "eps=" << eps << " L=" << L << " n_small=" << s.n_small
          << " next=" << std::abs(s.eigenvalues[L]) << "; ";
        ok = ok && s.n_small == L && rest;
      }
    }
    double secs = seconds_since(t0);
    d << "time=" << secs << "s";
    return ok && secs < 30.0;
  });

  const auto sandwich = cases::assemble(cases::sandwich(1e6));
  const auto id = Preconditioner::identity(sandwich.A.n());
  const auto jac = Preconditioner::jacobi(sandwich.A);

  run("fig3-spectrum-and-cycle-size", [&](std::ostringstream& d) {
    auto s = spectrum(sandwich.A, 1e-4);
    auto g100 = gmres(sandwich.A, sandwich.b, {}, jac, options(100, 1000));
    auto g20 = gmres(sandwich.A, sandwich.b, {}, jac, options(20, 200));
    d << "n_small=" << s.n_small << " gap=" << s.gap_ratio << " gmres100_iters=" << g100.iterations
      << " gmres20_converged_within_200=" << g20.converged;
    return s.n_small == 2 && s.gap_ratio >= 100.0 && g100.converged && g100.iterations >= 25 &&
           g100.iterations <= 55 && !g20.converged;
  });

  run("fig4-ritz-traces", [&](std::ostringstream& d) {
    GmresOptions o20 = options(20, 100);
    o20.ritz_keep = 1;
    auto t20 = gmres(sandwich.A, sandwich.b, {}, id, o20);
    bool resets = true;
    std::size_t count = 0;
    for (std::size_t i = 1; i < t20.ritz_trace.size(); ++i) {
      const auto& prev = t20.ritz_trace[i - 1];
      const auto& cur = t20.ritz_trace[i];
      if (cur.cycle != prev.cycle) {
        ++count;
        resets = resets && cur.k == 1 && prev.k == 20;
      }
    }
    GmresOptions o100 = options(100, 1000);
    o100.ritz_keep = 2;
    auto t100 = gmres(sandwich.A, sandwich.b, {}, id, o100);
    auto s = spectrum(sandwich.A, 1e-4);
    const auto& last = t100.ritz_trace.back().values;
    double e0 = std::abs(last[0] - s.eigenvalues[0]) / std::abs(s.eigenvalues[0]);
    double e1 = std::abs(last[1] - s.eigenvalues[1]) / std::abs(s.eigenvalues[1]);
    d << "gmres20_restarts_seen=" << count << " resets_ok=" << resets << " ritz_rel_err=" << e0
      << "," << e1;
    return resets && count >= 4 && e0 <= 0.05 && e1 <= 0.05;
  });

  run("eq13-formulations-agree", [](std::ostringstream& d) {
    std::mt19937_64 rng(1301);
    std::size_t cycles = 0;
    double worst = 0.0;
    auto compare = [&](const SparseMatrix& a, const Vector& b, std::size_t m) {
      auto data = first_cycle(a, b, m);
      auto ta = harmonic_spectrum_a(data).thetas;
      auto tb = harmonic_spectrum_b(data).thetas;
      if (ta.size() != tb.size()) {
        worst = 1.0;
        return;
      }
      std::sort(ta.begin(), ta.end(), re_im);
      std::sort(tb.begin(), tb.end(), re_im);
      for (std::size_t i = 0; i < ta.size(); ++i) worst = std::max(worst, std::abs(ta[i] - tb[i]) / std::abs(ta[i]));
      ++cycles;
    };
    for (int t = 0; t < 7; ++t) {
      auto a = random_sparse(rng, 80, 0.08, 0.5);
      compare(a, random_vector(rng, 80), 12);
    }
    for (int t = 0; t < 7; ++t) {
      auto p = cases::assemble(cases::alternating_stack(1 + t % 3, 1e-5));
      compare(p.A, random_vector(rng, p.A.n()), 10 + 3 * static_cast<std::size_t>(t));
    }
    std::lognormal_distribution<double> logk(0.0, 2.0);
    for (int t = 0; t < 7; ++t) {
      Grid g{6, 5, 4};
      PermeabilityField f{g, Vector(g.cells()), Vector(g.cells()), Vector(g.cells())};
      for (std::size_t c = 0; c < g.cells(); ++c) f.kx[c] = f.ky[c] = f.kz[c] = logk(rng);
      auto p = diagonal_scale(assemble_pressure(f, BoundarySpec{}, {}));
      compare(p.A, random_vector(rng, p.A.n()), 15);
    }
    d << "cycles=" << cycles << " max_rel_diff=" << worst;
    return cycles >= 20 && worst <= 1e-8;
  });

  run("eq10-residual-dominance", [](std::ostringstream& d) {
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    std::size_t steps = 0;
    for (std::size_t dim : {1, 2, 3}) {
      for (std::size_t n : {40, 70, 100}) {
        auto a = similar_to_diagonal(rng, n);
        auto eig = dense_eig(to_dense(a), true);
        DeflationBasis z(n);
        for (std::size_t j = 0; j < dim; ++j) {
          Eigen::VectorXd v = eig.vectors.col(static_cast<Eigen::Index>(j)).real();
          z.add_dense(Vector(v.data(), v.data() + v.size()));
        }
        Vector b = random_vector(rng, n);
        auto I = Preconditioner::identity(n);
        auto ctx = build_context(a, I, z, b, ProjectionOperator::APreconditioned);
        GmresOptions o = options(n, n);
        o.tol = 1e-12;
        auto plain = gmres(a, b, {}, I, o);
        auto defl = gmres(a, b, {}, I, o, &ctx);
        std::size_t len = std::min(plain.residual_history.size(), defl.residual_history.size());
        for (std::size_t k = 0; k < len; ++k) {
          worst = std::max(worst, defl.residual_history[k] / plain.residual_history[k]);
          ++steps;
        }
      }
    }
    d << "steps=" << steps << " max_ratio=" << worst;
    return worst <= 1.0 + 1e-8;
  });

  run("projector-suite", [](std::ostringstream& d) {
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 20 + static_cast<std::size_t>(trial % 4) * 10;
      const std::size_t dim = 1 + static_cast<std::size_t>(trial) % 6;
      auto a = random_sparse(rng, n, 0.15, 3.0);
      auto M = Preconditioner::jacobi(a);
      auto choice = trial % 2 == 0 ? ProjectionOperator::A : ProjectionOperator::APreconditioned;
      DeflationBasis z(n);
      for (std::size_t j = 0; j < dim; ++j) z.add_dense(random_vector(rng, n));
      auto ctx = build_context(a, M, z, random_vector(rng, n), choice);
      auto ap = [&](const Vector& v) {
        return choice == ProjectionOperator::A ? spmv(a, v) : spmv(a, M.apply(v));
      };
      Vector v = random_vector(rng, n);
      Vector p1v = apply_p1(ctx, v);
      Vector p2v = apply_p2(ctx, v);
      worst = std::max(worst, rel(apply_p1(ctx, p1v), p1v));
      worst = std::max(worst, rel(apply_p2(ctx, p2v), p2v));
      worst = std::max(worst, rel(apply_p1(ctx, ap(v)), ap(p2v)));
      Vector ztp = z.transpose_apply(p1v);
      double zscale = 0.0;
      for (std::size_t j = 0; j < dim; ++j) zscale = std::max(zscale, norm2(z.dense_column(j)));
      worst = std::max(worst, norm2(ztp) / (zscale * norm2(v)));
      for (std::size_t j = 0; j < dim; ++j) {
        Vector zj = z.dense_column(j);
        worst = std::max(worst, norm2(apply_p2(ctx, zj)) / norm2(zj));
      }
      // Dense oracle.
      Eigen::MatrixXd ad = to_dense(a);
      Eigen::MatrixXd apd = ad;
      if (choice == ProjectionOperator::APreconditioned) apd = ad * ad.diagonal().cwiseInverse().asDiagonal();
      Eigen::MatrixXd zd(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
      for (std::size_t j = 0; j < dim; ++j) {
        Vector zj = z.dense_column(j);
        zd.col(static_cast<Eigen::Index>(j)) = Eigen::Map<Eigen::VectorXd>(zj.data(), static_cast<Eigen::Index>(n));
      }
      Eigen::MatrixXd einv = (zd.transpose() * apd * zd).inverse();
      Eigen::VectorXd ve = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(n));
      Eigen::VectorXd o1 = ve - apd * zd * (einv * (zd.transpose() * ve));
      Eigen::VectorXd o2 = ve - zd * (einv * (zd.transpose() * (apd * ve)));
      worst = std::max(worst, rel(p1v, Vector(o1.data(), o1.data() + o1.size())));
      worst = std::max(worst, rel(p2v, Vector(o2.data(), o2.data() + o2.size())));
    }
    d << "trials=100 max_rel_err=" << worst;
    return worst <= 1e-10;
  });

  run("sec4.1.1-cycle-size-sigma1e8", [](std::ostringstream& d) {
    auto p = cases::assemble(cases::sandwich(1e8));
    auto M = Preconditioner::jacobi(p.A);
    RdgmresOptions o;
    o.d = 3;
    o.gmres = options(20, 300);
    auto r20 = rdgmres(p.A, p.b, {}, M, o);
    o.gmres = options(40, 300);
    auto r40 = rdgmres(p.A, p.b, {}, M, o);
    d << "rdgmres20: converged=" << r20.converged << " iters=" << r20.iterations
      << "; rdgmres40: converged=" << r40.converged << " iters=" << r40.iterations;
    return !r20.converged && r40.converged;
  });

  run("fig12b-sagd-halving", [](std::ostringstream& d) {
    auto c = cases::sagd();
    auto p = cases::assemble(c);
    auto M = Preconditioner::jacobi(p.A);
    auto g = gmres(p.A, p.b, {}, M, options(30, 5000));
    auto z = partition_to_basis(manual_layers(c.field.grid, c.layers));
    auto pd = pdgmres(p.A, p.b, {}, M, options(30, 5000), z);
    double ratio = double(pd.iterations) / double(g.iterations);
    d << "gmres30=" << g.iterations << " pdgmres30(d=" << z.d() << ")=" << pd.iterations
      << " ratio=" << ratio;
    return g.converged && pd.converged && z.d() == 10 && ratio <= 0.6;
  });

  run("fig13-ordering", [&](std::ostringstream& d) {
    auto g = gmres(sandwich.A, sandwich.b, {}, jac, options(20, 300));
    RdgmresOptions o;
    o.d = 3;
    o.gmres = options(40, 300);
    auto rd = rdgmres(sandwich.A, sandwich.b, {}, jac, o);
    auto tc = cases::sandwich(1e6);
    auto z = partition_to_basis(manual_layers(tc.field.grid, tc.layers));
    auto pd = pdgmres(sandwich.A, sandwich.b, {}, jac, options(20, 300), z);
    auto its = [](const SolveReport& r) { return r.converged ? r.iterations : std::size_t{300}; };
    d << "pdgmres(20,3)=" << its(pd) << " rdgmres(40,3)=" << its(rd) << " gmres(20)=" << its(g)
      << (g.converged ? "" : " (cap)");
    return pd.converged && rd.converged && its(pd) < its(rd) && its(rd) < its(g);
  });

  run("levelset-correctness", [](std::ostringstream& d) {
    auto s = cases::sandwich(1e6).field;
    auto lv = levelset_partition(s);
    bool layers = lv.d == 3;
    for (std::size_t c = 0; c < s.grid.cells(); ++c) layers = layers && lv.labels[c] == s.grid.coords(c)[2];

    Grid g{4, 4, 1};
    Vector k(16, 1e-3);
    for (std::size_t i = 0; i < 4; ++i) k[g.index(0, i, 0)] = k[g.index(i, 0, 0)] = 1.0;
    auto l = levelset_partition(PermeabilityField{g, k, k, k});
    std::vector<std::size_t> mask(16);
    for (std::size_t c = 0; c < 16; ++c) mask[c] = k[c] == 1.0 ? 0 : 1;
    bool lshape = l.d == 2 && same_regions(l.labels, mask);

    auto one = subdomain_levelset_partition(s, 1, 1, 1);
    bool red1 = one.d == lv.d && same_regions(one.labels, lv.labels);
    Grid h{6, 5, 4};
    Vector ones(h.cells(), 2.0);
    bool red2 = true;
    for (std::size_t px : {1, 2, 3}) {
      auto a = subdomain_levelset_partition(PermeabilityField{h, ones, ones, ones}, px, 2, 2);
      auto b = subdomain_partition(h, px, 2, 2);
      red2 = red2 && a.d == b.d && same_regions(a.labels, b.labels);
    }
    d << "sandwich_d=" << lv.d << " layers_exact=" << layers << " lshape_d=" << l.d
      << " one_box_equiv=" << red1 << " homogeneous_equiv=" << red2;
    return layers && lshape && red1 && red2;
  });

  run("bench-wall-time-and-p1-cost", [&](std::ostringstream& d) {
    auto tc = cases::sandwich(1e6);
    auto z = partition_to_basis(manual_layers(tc.field.grid, tc.layers));
    auto solve_pd = [&] {
      auto ctx = build_context(sandwich.A, jac, z, sandwich.b);
      return gmres(sandwich.A, sandwich.b, {}, jac, options(20, 5000), &ctx);
    };
    auto pd = solve_pd();
    auto g20 = gmres(sandwich.A, sandwich.b, {}, jac, options(20, 20000));
    auto g100 = gmres(sandwich.A, sandwich.b, {}, jac, options(100, 5000));
    double t_pd = bench::time_per_call_ms([&] { solve_pd(); }, 7, 3);
    double t_g20 = bench::time_per_call_ms([&] { gmres(sandwich.A, sandwich.b, {}, jac, options(20, 20000)); }, 7, 3);
    double t_g100 = bench::time_per_call_ms([&] { gmres(sandwich.A, sandwich.b, {}, jac, options(100, 5000)); }, 7, 3);

    auto bo = cases::black_oil();
    auto pb = cases::assemble(bo);
    double worst_p1 = 0.0;
    for (std::size_t dim : {1, 3, 10}) {
      auto zb = partition_to_basis(subdomain_partition(pb.grid, 1, 1, dim));
      auto ctx = build_context(pb.A, Preconditioner::jacobi(pb.A), zb, pb.b);
      worst_p1 = std::max(worst_p1, bench::p1_cost_in_spmv(ctx, 9));
    }
    d << "pdgmres_ms=" << t_pd << " (iters " << pd.iterations << ") gmres20_ms=" << t_g20 << " (iters "
      << g20.iterations << ", converged=" << g20.converged << ") gmres100_ms=" << t_g100 << " (iters "
      << g100.iterations << ") max_p1_cost_spmv(d<=10)=" << worst_p1;
    return pd.converged && g20.converged && g100.converged && t_pd < t_g20 && t_pd < t_g100 &&
           worst_p1 <= 3.0;
  });

  std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "SOME FAIL", failures);
  return failures == 0 ? 0 : 1;
}
