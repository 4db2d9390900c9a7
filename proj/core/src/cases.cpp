#include "deflate/cases.hpp"

#include "deflate/errors.hpp"

namespace deflate::cases {

namespace {

std::vector<Well> corner_wells() {
  return {{0, 0, 2, 1.0}, {6, 6, 0, -1.0}};
}

std::vector<ZRange> unit_layers(std::size_t nz, std::size_t h) {
  std::vector<ZRange> out;
  for (std::size_t z = 0; z < nz; z += h) out.emplace_back(z, z + h);
  return out;
}

TestCase three_layer(const std::string& name, double a, double b, double c) {
  Grid g{7, 7, 3};
  std::vector<LayerSpec> layers{{0, 1, a}, {1, 2, b}, {2, 3, c}};
  return {name, make_layered_field(g, layers), {}, corner_wells(), unit_layers(3, 1)};
}

}  // namespace

TestCase sandwich(double sigma) { return three_layer("sandwich", sigma, 1.0, sigma); }

TestCase sandwich_low(double eps) { return three_layer("sandwich-low", 1.0, eps, 1.0); }

TestCase alternating_stack(std::size_t high_layers, double eps, std::size_t thickness) {
  if (high_layers == 0 || thickness == 0) throw InvalidArgument("alternating_stack: counts must be >= 1");
  const std::size_t count = 2 * high_layers + 1;
  Grid g{7, 7, count * thickness};
  std::vector<LayerSpec> layers;
  for (std::size_t l = 0; l < count; ++l) {
    layers.push_back({l * thickness, (l + 1) * thickness, l % 2 == 0 ? eps : 1.0});
  }
  return {"alternating", make_layered_field(g, layers), {}, {}, unit_layers(g.nz, thickness)};
}

TestCase high_low_stack(double eps) {
  Grid g{7, 7, 5};
  std::vector<LayerSpec> layers;
  for (std::size_t l = 0; l < 5; ++l) layers.push_back({l, l + 1, l % 2 == 0 ? 1.0 : eps});
  return {"high-low", make_layered_field(g, layers), {}, corner_wells(), unit_layers(5, 1)};
}

TestCase black_oil() {
  Grid g{15, 15, 10};
  std::vector<LayerSpec> layers{{0, 5, 1.0}, {5, 10, 0.1}};
  std::vector<Well> wells{{3, 3, 0, 1.0}, {11, 11, 0, 1.0}};
  const std::size_t producers[7][2] = {{0, 0}, {14, 0}, {0, 14}, {14, 14}, {7, 7}, {7, 0}, {0, 7}};
  for (const auto& p : producers) wells.push_back({p[0], p[1], 9, -2.0 / 7.0});
  return {"black-oil", make_layered_field(g, layers), {}, wells, {{0, 5}, {5, 10}}};
}

std::vector<std::size_t> sagd_band_edges() { return {21, 25, 29, 33, 37, 42, 46, 50, 54, 59, 64}; }

TestCase sagd(const std::vector<double>& band_values) {
  const auto edges = sagd_band_edges();
  if (band_values.size() + 1 != edges.size()) {
    throw InvalidArgument("sagd: expected " + std::to_string(edges.size() - 1) + " band values");
  }
  Grid g{41, 1, 85};
  std::vector<LayerSpec> bands{{0, edges.front(), 0.0}};
  std::vector<ZRange> layers;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    bands.push_back({edges[i], edges[i + 1], band_values[i]});
    layers.emplace_back(edges[i], edges[i + 1]);
  }
  bands.push_back({edges.back(), g.nz, 0.0});
  std::vector<Well> wells{{20, 0, 22, -1.0}, {20, 0, 25, 1.0}};
  return {"sagd", make_sagd_like_field(g, bands), {}, wells, layers};
}

TestCase sagd() {
  return sagd({1.0, 1.0, 1.0, 1e3, 1e3, 1e3, 1e3, 1.0, 1.0, 1.0});
}

PressureProblem assemble(const TestCase& c, bool scale) {
  Vector q = make_source(c.field.grid, c.wells);
  PressureProblem p = assemble_pressure(c.field, c.bc, q);
  return scale ? diagonal_scale(p) : p;
}

}  // namespace deflate::cases
