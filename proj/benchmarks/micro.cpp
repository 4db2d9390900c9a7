#include <benchmark/benchmark.h>

#include "deflate/cases.hpp"
#include "deflate/deflation.hpp"
#include "deflate/krylov.hpp"
#include "deflate/physics.hpp"

using namespace deflate;

namespace {

const PressureProblem& black_oil_problem() {
  static const PressureProblem p = cases::assemble(cases::black_oil());
  return p;
}

const PressureProblem& sandwich_problem() {
  static const PressureProblem p = cases::assemble(cases::sandwich(1e6));
  return p;
}

}  // namespace

static void BM_Spmv(benchmark::State& state) {
  const auto& p = black_oil_problem();
  Vector x(p.A.n(), 1.0);
  Vector y(p.A.n());
  for (auto _ : state) {
    p.A.multiply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * p.A.nnz()));
}
BENCHMARK(BM_Spmv);

// Z from d horizontal slabs of the 15x15x10 grid.
static void BM_ApplyP1(benchmark::State& state) {
  const auto& p = black_oil_problem();
  const auto d = static_cast<std::size_t>(state.range(0));
  DeflationBasis z = partition_to_basis(subdomain_partition(p.grid, 1, 1, d));
  DeflationContext ctx = build_context(p.A, Preconditioner::identity(p.A.n()), z, p.b);
  Vector v(p.A.n(), 1.0);
  for (auto _ : state) {
    apply_p1_inplace(ctx, v);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_ApplyP1)->Arg(1)->Arg(3)->Arg(10);

static void BM_BuildContext(benchmark::State& state) {
  const auto& p = black_oil_problem();
  const auto d = static_cast<std::size_t>(state.range(0));
  DeflationBasis z = partition_to_basis(subdomain_partition(p.grid, 1, 1, d));
  auto M = Preconditioner::identity(p.A.n());
  for (auto _ : state) benchmark::DoNotOptimize(build_context(p.A, M, z, p.b));
}
BENCHMARK(BM_BuildContext)->Arg(1)->Arg(3)->Arg(10);

static void BM_GmresSandwich(benchmark::State& state) {
  const auto& p = sandwich_problem();
  GmresOptions o;
  o.restart = static_cast<std::size_t>(state.range(0));
  o.max_iters = 300;
  auto M = Preconditioner::identity(p.A.n());
  for (auto _ : state) benchmark::DoNotOptimize(gmres(p.A, p.b, {}, M, o));
}
BENCHMARK(BM_GmresSandwich)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_PdgmresSandwich(benchmark::State& state) {
  const auto& p = sandwich_problem();
  GmresOptions o;
  o.restart = 20;
  o.max_iters = 300;
  auto M = Preconditioner::identity(p.A.n());
  DeflationBasis z = partition_to_basis(manual_layers(p.grid, cases::sandwich(1e6).layers));
  for (auto _ : state) benchmark::DoNotOptimize(pdgmres(p.A, p.b, {}, M, o, z));
}
BENCHMARK(BM_PdgmresSandwich)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
