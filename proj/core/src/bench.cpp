#include "deflate/bench.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>

#include "deflate/errors.hpp"
#include "deflate/harmonic_ritz.hpp"
#include "deflate/io.hpp"
#include "deflate/physics.hpp"

namespace deflate::bench {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

DeflationBasis basis_for(const MethodSpec& spec, const cases::TestCase& tc, const Grid& grid) {
  if (spec.boxes[0] == 0) return partition_to_basis(manual_layers(grid, tc.layers));
  return partition_to_basis(subdomain_partition(grid, spec.boxes[0], spec.boxes[1], spec.boxes[2]));
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double p1_cost_in_spmv(const DeflationContext& ctx, std::size_t repeats) {
  const std::size_t n = ctx.n();
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + static_cast<double>(i % 7);
  Vector y(n);
  // Batches of roughly a millisecond keep timer resolution out of the ratio.
  const std::size_t batch = std::max<std::size_t>(16, 200000 / std::max<std::size_t>(1, ctx.A.nnz()));
  double t_spmv = time_per_call_ms([&] { ctx.A.multiply(v, y); }, repeats, batch);
  Vector w = v;
  double t_p1 = time_per_call_ms(
      [&] {
        std::copy(v.begin(), v.end(), w.begin());
        apply_p1_inplace(ctx, w);
      },
      repeats, batch);
  return t_p1 / t_spmv;
}

std::string method_label(const MethodSpec& m) {
  switch (m.kind) {
    case MethodKind::Gmres: return "gmres";
    case MethodKind::Rdgmres: return "rdgmres";
    case MethodKind::Pdgmres: return "pdgmres";
  }
  return "?";
}

CostReport overhead_suite(const std::vector<cases::TestCase>& problems,
                          const std::vector<MethodSpec>& methods, std::size_t repeats) {
  if (repeats < 3) throw InvalidArgument("overhead_suite: repeats must be >= 3");
  CostReport report;
  for (const auto& tc : problems) {
    std::vector<double> assembly;
    PressureProblem p;
    for (std::size_t r = 0; r <= repeats; ++r) {
      auto t0 = Clock::now();
      p = cases::assemble(tc, true);
      if (r > 0) assembly.push_back(elapsed_ms(t0));
    }
    const double assembly_ms = median(assembly);
    const Preconditioner M = Preconditioner::jacobi(p.A);

    for (const auto& spec : methods) {
      CostRow row;
      row.problem = tc.name;
      row.method = method_label(spec);
      row.m = spec.m;
      row.assembly_ms = assembly_ms;
      GmresOptions o;
      o.restart = spec.m;
      o.tol = spec.tol;
      o.max_iters = spec.max_iters;

      std::vector<double> setup;
      std::vector<double> solve;
      for (std::size_t r = 0; r <= repeats; ++r) {
        SolveReport rep;
        std::optional<DeflationContext> ctx;
        double setup_ms = 0.0;
        auto t0 = Clock::now();
        if (spec.kind == MethodKind::Gmres) {
          rep = gmres(p.A, p.b, {}, M, o);
        } else if (spec.kind == MethodKind::Rdgmres) {
          RdgmresOptions ro;
          ro.gmres = o;
          ro.d = spec.d;
          rep = rdgmres(p.A, p.b, {}, M, ro);
          setup_ms = rep.setup_ms;
        } else {
          auto ts = Clock::now();
          ctx.emplace(build_context(p.A, M, basis_for(spec, tc, p.grid), p.b));
          setup_ms = elapsed_ms(ts);
          rep = gmres(p.A, p.b, {}, M, o, &*ctx);
        }
        const double total = elapsed_ms(t0);
        if (ctx && r == repeats) row.p1_cost_spmv = p1_cost_in_spmv(*ctx);
        if (r == 0) continue;
        setup.push_back(setup_ms);
        solve.push_back(total);
        row.iters = rep.iterations;
        row.converged = rep.converged;
        row.d = rep.deflation_dim;
      }
      row.setup_ms = median(setup);
      row.solve_ms = median(solve);
      auto [lo, hi] = std::minmax_element(solve.begin(), solve.end());
      row.solve_dispersion = row.solve_ms > 0.0 ? (*hi - *lo) / row.solve_ms : 0.0;
      report.rows.push_back(row);
    }
  }
  return report;
}

void write_bench_csv(std::ostream& out, const CostReport& report) {
  out << "problem,method,m,d,iters,setup_ms,solve_ms,p1_cost_spmv\n";
  for (const auto& r : report.rows) {
    out << r.problem << ',' << r.method << ',' << r.m << ',' << r.d << ',' << r.iters << ','
        << io::format_double(r.setup_ms) << ',' << io::format_double(r.solve_ms) << ','
        << io::format_double(r.p1_cost_spmv) << '\n';
  }
}

}  // namespace deflate::bench
