#ifndef DEFLATE_CASES_HPP
#define DEFLATE_CASES_HPP

#include <string>
#include <vector>

#include "deflate/physics.hpp"
#include "deflate/testbed.hpp"

namespace deflate::cases {

/// A ready-to-assemble experiment problem.
struct TestCase {
  std::string name;
  PermeabilityField field;
  BoundarySpec bc;
  std::vector<Well> wells;
  /// Layer ranges used for manual deflation vectors.
  std::vector<ZRange> layers;
};

/// 7x7x3, layers (sigma, 1, sigma), injector and producer in opposite corners.
TestCase sandwich(double sigma);
/// 7x7x3, layers (1, eps, 1), same wells.
TestCase sandwich_low(double eps);
/// 7x7x((2L+1)h): low, high, low, ..., low with L high layers of value 1 and
/// low layers of value eps, each h cells thick. No sources.
TestCase alternating_stack(std::size_t high_layers, double eps, std::size_t thickness = 1);
/// 7x7x5, high, low, high, low, high.
TestCase high_low_stack(double eps);
/// 15x15x10 two-layer field, k=1 below z=5 and 0.1 above; two injectors at
/// the bottom, seven producers at the top.
TestCase black_oil();
/// 41x1x85 with zero bands z<21 and z>=64 and ten central bands.
TestCase sagd();
/// Same grid and wells with caller-chosen central band values (bottom first).
TestCase sagd(const std::vector<double>& band_values);

/// Central band boundaries of the SAGD-like field.
std::vector<std::size_t> sagd_band_edges();

PressureProblem assemble(const TestCase& c, bool scale = true);

}  // namespace deflate::cases

#endif
