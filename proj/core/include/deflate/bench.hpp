#ifndef DEFLATE_BENCH_HPP
#define DEFLATE_BENCH_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "deflate/cases.hpp"
#include "deflate/deflation.hpp"

namespace deflate::bench {

enum class MethodKind { Gmres, Rdgmres, Pdgmres };

struct MethodSpec {
  MethodKind kind = MethodKind::Gmres;
  std::size_t m = 30;
  /// rdgmres: number of harmonic Ritz vectors.
  std::size_t d = 0;
  /// pdgmres: subdomain boxes; all zero means the case's own layers.
  std::array<std::size_t, 3> boxes{0, 0, 0};
  double tol = 1e-6;
  std::size_t max_iters = 2000;
};

struct CostRow {
  std::string problem;
  std::string method;
  std::size_t m = 0;
  std::size_t d = 0;
  std::size_t iters = 0;
  bool converged = false;
  double assembly_ms = 0.0;
  double setup_ms = 0.0;
  double solve_ms = 0.0;
  /// Median apply_p1 time over median spmv time; 0 without deflation.
  double p1_cost_spmv = 0.0;
  /// (max - min) / median of the solve times.
  double solve_dispersion = 0.0;
};

struct CostReport {
  std::vector<CostRow> rows;
};

double median(std::vector<double> values);

/// Milliseconds per call of `fn`, median over `repeats` batches after one
/// discarded warm-up batch.
template <typename Fn>
double time_per_call_ms(Fn&& fn, std::size_t repeats, std::size_t batch);

/// apply_p1 cost in units of one spmv with the context's matrix.
double p1_cost_in_spmv(const DeflationContext& ctx, std::size_t repeats = 7);

/// Median-of-repeats timings of every method on every problem.
CostReport overhead_suite(const std::vector<cases::TestCase>& problems,
                          const std::vector<MethodSpec>& methods, std::size_t repeats = 3);

std::string method_label(const MethodSpec& m);

/// `problem,method,m,d,iters,setup_ms,solve_ms,p1_cost_spmv`
void write_bench_csv(std::ostream& out, const CostReport& report);

}  // namespace deflate::bench

#include <chrono>

namespace deflate::bench {

template <typename Fn>
double time_per_call_ms(Fn&& fn, std::size_t repeats, std::size_t batch) {
  std::vector<double> samples;
  for (std::size_t r = 0; r <= repeats; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    for (std::size_t k = 0; k < batch; ++k) fn();
    auto dt = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (r > 0) samples.push_back(dt / static_cast<double>(batch));
  }
  return median(std::move(samples));
}

}  // namespace deflate::bench

#endif
