// Deflation overhead versus iteration savings; writes the bench CSV to stdout.
#include <cstdlib>
#include <iostream>
#include <string>

#include "deflate/bench.hpp"

using namespace deflate;

int main(int argc, char** argv) {
  std::size_t repeats = 5;
  if (argc > 1) repeats = static_cast<std::size_t>(std::strtoul(argv[1], nullptr, 10));
  if (repeats < 3) {
    std::cerr << "usage: deflate_overhead [repeats >= 3]\n";
    return 1;
  }

  std::vector<cases::TestCase> problems{cases::sandwich(1e6), cases::black_oil(), cases::sagd()};
  std::vector<bench::MethodSpec> methods{
      {bench::MethodKind::Gmres, 20, 0, {0, 0, 0}, 1e-6, 2000},
      {bench::MethodKind::Gmres, 30, 0, {0, 0, 0}, 1e-6, 2000},
      {bench::MethodKind::Rdgmres, 40, 3, {0, 0, 0}, 1e-6, 2000},
      {bench::MethodKind::Pdgmres, 20, 0, {0, 0, 0}, 1e-6, 2000},
      {bench::MethodKind::Pdgmres, 30, 0, {0, 0, 0}, 1e-6, 2000},
  };
  bench::write_bench_csv(std::cout, bench::overhead_suite(problems, methods, repeats));

  // d sweep on z slabs of a sixteen-layer alternating stack.
  std::vector<bench::MethodSpec> sweep;
  for (std::size_t d : {2, 4, 8, 16}) {
    sweep.push_back({bench::MethodKind::Pdgmres, 20, 0, {1, 1, d}, 1e-6, 2000});
  }
  auto stack = cases::alternating_stack(8, 1e-4, 1);
  stack.wells = {{0, 0, 16, 1.0}, {6, 6, 0, -1.0}};
  bench::write_bench_csv(std::cout, bench::overhead_suite({stack}, sweep, repeats));
  return 0;
}
