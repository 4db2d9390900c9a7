#include "deflate/testbed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "deflate/errors.hpp"
#include "deflate/io.hpp"

namespace deflate {

namespace {

void check_partition_of_layers(const Grid& grid, std::span<const LayerSpec> layers) {
  std::vector<LayerSpec> sorted(layers.begin(), layers.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const LayerSpec& a, const LayerSpec& b) { return a.z_begin < b.z_begin; });
  std::size_t expected = 0;
  for (const auto& l : sorted) {
    if (l.z_begin >= l.z_end) {
      throw InvalidArgument("empty layer range [" + std::to_string(l.z_begin) + ", " +
                            std::to_string(l.z_end) + ")");
    }
    if (l.z_begin < expected) {
      throw InvalidArgument("overlapping layer ranges at z=" + std::to_string(l.z_begin));
    }
    if (l.z_begin > expected) {
      throw InvalidArgument("layer ranges leave z=" + std::to_string(expected) + " uncovered");
    }
    expected = l.z_end;
  }
  if (expected != grid.nz) {
    throw InvalidArgument("layer ranges cover [0, " + std::to_string(expected) +
                          ") but the grid has nz=" + std::to_string(grid.nz));
  }
}

Vector fill_layers(const Grid& grid, std::span<const LayerSpec> layers) {
  Vector k(grid.cells(), 0.0);
  const std::size_t plane = grid.nx * grid.ny;
  for (const auto& l : layers) {
    std::fill(k.begin() + static_cast<std::ptrdiff_t>(l.z_begin * plane),
              k.begin() + static_cast<std::ptrdiff_t>(l.z_end * plane), l.value);
  }
  return k;
}

}  // namespace

void Grid::validate() const {
  if (nx == 0 || ny == 0 || nz == 0) throw InvalidArgument("grid cell counts must be >= 1");
  if (!(dx > 0.0) || !(dy > 0.0) || !(dz > 0.0)) {
    throw InvalidArgument("grid spacing must be positive");
  }
}

PermeabilityField make_layered_field(const Grid& grid, std::span<const LayerSpec> layers) {
  grid.validate();
  check_partition_of_layers(grid, layers);
  for (const auto& l : layers) {
    if (!(l.value > 0.0)) throw InvalidArgument("layer permeability must be positive");
  }
  Vector k = fill_layers(grid, layers);
  return {grid, k, k, k};
}

PermeabilityField make_sagd_like_field(const Grid& grid, std::span<const LayerSpec> bands) {
  grid.validate();
  check_partition_of_layers(grid, bands);
  for (const auto& l : bands) {
    if (!(l.value >= 0.0)) throw InvalidArgument("band permeability must be nonnegative");
  }
  Vector k = fill_layers(grid, bands);
  Vector kz = k;
  for (double& v : kz) v *= 0.5;
  return {grid, k, k, std::move(kz)};
}

double face_transmissibility(double k1, double k2, double area, double distance) {
  double sum = k1 + k2;
  if (sum <= 0.0) return 0.0;
  return 2.0 * k1 * k2 / sum * area / distance;
}

double dirichlet_transmissibility(double k_cell, double k_ghost, double area, double distance) {
  if (k_cell <= 0.0 || k_ghost <= 0.0) return 0.0;
  double half = 0.5 * distance;
  return area / (half / k_cell + half / k_ghost);
}

PressureProblem assemble_pressure(const PermeabilityField& field, const BoundarySpec& bc,
                                  std::span<const double> q) {
  const Grid& g = field.grid;
  g.validate();
  const std::size_t n = g.cells();
  if (field.kx.size() != n || field.ky.size() != n || field.kz.size() != n) {
    throw DimensionMismatch("permeability field does not match grid size");
  }
  if (!q.empty() && q.size() != n) throw DimensionMismatch("source vector does not match grid");
  for (std::size_t c = 0; c < n; ++c) {
    if (!(field.kx[c] >= 0.0 && field.ky[c] >= 0.0 && field.kz[c] >= 0.0)) {
      throw InvalidArgument("negative permeability in cell " + std::to_string(c));
    }
  }
  if (bc.kind == BoundaryKind::NeumannTopDirichlet && !(bc.dirichlet_perm > 0.0)) {
    throw InvalidArgument("dirichlet_perm must be positive");
  }

  Vector diag(n, 0.0);
  std::vector<Triplet> offdiag;
  offdiag.reserve(6 * n);
  // Union-find over positive faces, for the Neumann compatibility check.
  std::vector<std::size_t> parent(n);
  for (std::size_t c = 0; c < n; ++c) parent[c] = c;
  auto find = [&](std::size_t c) {
    while (parent[c] != c) {
      parent[c] = parent[parent[c]];
      c = parent[c];
    }
    return c;
  };

  auto couple = [&](std::size_t a, std::size_t b, double t) {
    if (t <= 0.0) return;
    diag[a] += t;
    diag[b] += t;
    offdiag.push_back({a, b, -t});
    offdiag.push_back({b, a, -t});
    parent[find(a)] = find(b);
  };

  for (std::size_t iz = 0; iz < g.nz; ++iz) {
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
      for (std::size_t ix = 0; ix < g.nx; ++ix) {
        std::size_t c = g.index(ix, iy, iz);
        if (ix + 1 < g.nx) {
          std::size_t o = g.index(ix + 1, iy, iz);
          couple(c, o, face_transmissibility(field.kx[c], field.kx[o], g.dy * g.dz, g.dx));
        }
        if (iy + 1 < g.ny) {
          std::size_t o = g.index(ix, iy + 1, iz);
          couple(c, o, face_transmissibility(field.ky[c], field.ky[o], g.dx * g.dz, g.dy));
        }
        if (iz + 1 < g.nz) {
          std::size_t o = g.index(ix, iy, iz + 1);
          couple(c, o, face_transmissibility(field.kz[c], field.kz[o], g.dx * g.dy, g.dz));
        }
      }
    }
  }

  std::vector<bool> has_dirichlet(n, false);
  if (bc.kind == BoundaryKind::NeumannTopDirichlet) {
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
      for (std::size_t ix = 0; ix < g.nx; ++ix) {
        for (std::size_t iz = g.nz; iz-- > 0;) {
          std::size_t c = g.index(ix, iy, iz);
          if (field.kz[c] > 0.0) {
            diag[c] += dirichlet_transmissibility(field.kz[c], bc.dirichlet_perm, g.dx * g.dy,
                                                  g.dz);
            has_dirichlet[c] = true;
            break;
          }
        }
      }
    }
  }

  Vector b(n, 0.0);
  if (!q.empty()) std::copy(q.begin(), q.end(), b.begin());

  // Compatibility: every component without a Dirichlet face must have zero net source.
  std::vector<double> net(n, 0.0);
  std::vector<double> mass(n, 0.0);
  std::vector<bool> anchored(n, false);
  for (std::size_t c = 0; c < n; ++c) {
    if (diag[c] == 0.0) continue;
    std::size_t r = find(c);
    net[r] += b[c];
    mass[r] += std::abs(b[c]);
    if (has_dirichlet[c]) anchored[r] = true;
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (diag[c] == 0.0 || find(c) != c || anchored[c]) continue;
    if (std::abs(net[c]) > 1e-12 * std::max(1.0, mass[c])) {
      throw SingularProblem("pure-Neumann component containing cell " + std::to_string(c) +
                            " has net source " + io::format_double(net[c]));
    }
  }

  std::vector<Triplet> entries = std::move(offdiag);
  for (std::size_t c = 0; c < n; ++c) {
    if (diag[c] == 0.0) {
      entries.push_back({c, c, 1.0});
      b[c] = 0.0;
    } else {
      entries.push_back({c, c, diag[c]});
    }
  }
  PressureProblem p;
  p.A = SparseMatrix::from_triplets(n, std::move(entries));
  p.b = std::move(b);
  p.grid = g;
  return p;
}

PressureProblem diagonal_scale(const PressureProblem& p) {
  const std::size_t n = p.A.n();
  Vector d = p.A.diagonal();
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] == 0.0) throw InvalidArgument("diagonal_scale: zero diagonal in row " + std::to_string(i));
  }
  auto offsets = p.A.row_offsets();
  auto cols = p.A.col_indices();
  Vector vals(p.A.values().begin(), p.A.values().end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
      vals[k] = cols[k] == i ? 1.0 : vals[k] / d[i];
    }
  }
  PressureProblem out;
  out.A = SparseMatrix(n, {offsets.begin(), offsets.end()}, {cols.begin(), cols.end()},
                       std::move(vals));
  out.b.resize(p.b.size());
  if (p.b.size() != n) throw DimensionMismatch("diagonal_scale: rhs length mismatch");
  for (std::size_t i = 0; i < n; ++i) out.b[i] = p.b[i] / d[i];
  out.scaling = std::move(d);
  out.grid = p.grid;
  return out;
}

Vector make_source(const Grid& grid, std::span<const Well> wells) {
  Vector q(grid.cells(), 0.0);
  for (const auto& w : wells) {
    if (w.ix >= grid.nx || w.iy >= grid.ny || w.iz >= grid.nz) {
      throw InvalidArgument("well outside the grid");
    }
    q[grid.index(w.ix, w.iy, w.iz)] += w.rate;
  }
  return q;
}

PermeabilityField load_field_file(const std::filesystem::path& path, const Grid& grid) {
  grid.validate();
  Vector all = io::read_reals(path);
  const std::size_t n = grid.cells();
  if (all.size() != n && all.size() != 2 * n && all.size() != 3 * n) {
    throw FormatError(path.string() + ": expected " + std::to_string(n) + ", " +
                      std::to_string(2 * n) + " or " + std::to_string(3 * n) +
                      " values, found " + std::to_string(all.size()));
  }
  auto block = [&](std::size_t k) {
    return Vector(all.begin() + static_cast<std::ptrdiff_t>(k * n),
                  all.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
  };
  PermeabilityField f;
  f.grid = grid;
  f.kx = block(0);
  f.ky = all.size() >= 2 * n ? block(1) : f.kx;
  f.kz = all.size() == 3 * n ? block(2) : f.kx;
  return f;
}

void save_field_file(const std::filesystem::path& path, const PermeabilityField& field) {
  auto out = io::open_output(path);
  for (const Vector* block : {&field.kx, &field.ky, &field.kz}) {
    for (double v : *block) out << io::format_double(v) << '\n';
  }
}

}  // namespace deflate
