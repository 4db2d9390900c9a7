#ifndef DEFLATE_TESTBED_HPP
#define DEFLATE_TESTBED_HPP

#include <array>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <span>
#include <vector>

#include "deflate/sparse.hpp"

namespace deflate {

/// Structured 3D cell grid. Linear cell index is ix + nx*(iy + ny*iz);
/// iz = nz-1 is the top layer.
struct Grid {
  std::size_t nx = 1;
  std::size_t ny = 1;
  std::size_t nz = 1;
  double dx = 1.0;
  double dy = 1.0;
  double dz = 1.0;

  std::size_t cells() const { return nx * ny * nz; }
  std::size_t index(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return ix + nx * (iy + ny * iz);
  }
  std::array<std::size_t, 3> coords(std::size_t cell) const {
    return {cell % nx, (cell / nx) % ny, cell / (nx * ny)};
  }
  /// Throws InvalidArgument on zero counts or nonpositive spacing.
  void validate() const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Per-cell scalar permeability along each axis.
struct PermeabilityField {
  Grid grid;
  Vector kx;
  Vector ky;
  Vector kz;

  friend bool operator==(const PermeabilityField&, const PermeabilityField&) = default;
};

/// Half-open layer range [z_begin, z_end) carrying one permeability value.
struct LayerSpec {
  std::size_t z_begin = 0;
  std::size_t z_end = 0;
  double value = 1.0;
};

/// Layers must partition [0, nz) exactly; values > 0. Isotropic.
PermeabilityField make_layered_field(const Grid& grid, std::span<const LayerSpec> layers);

/// kx = ky from the bands, kz = kx / 2. Zero-permeability bands allowed.
/// Bands must partition [0, nz).
PermeabilityField make_sagd_like_field(const Grid& grid, std::span<const LayerSpec> bands);

enum class BoundaryKind { NeumannAll, NeumannTopDirichlet };

/// Boundary conditions of the pressure equation. The Dirichlet value is 0 on
/// the top face of every column's highest positive-permeability cell; the
/// face couples the cell's half-cell in series with a ghost half-cell of
/// permeability `dirichlet_perm` (infinity gives the plain half-cell term).
struct BoundarySpec {
  BoundaryKind kind = BoundaryKind::NeumannTopDirichlet;
  double dirichlet_perm = 1.0;
};

/// Two-point flux transmissibility across a face between two cells.
double face_transmissibility(double k1, double k2, double area, double distance);

/// Series transmissibility from a cell centre through its half-cell and a
/// ghost half-cell of permeability `k_ghost`.
double dirichlet_transmissibility(double k_cell, double k_ghost, double area, double distance);

struct PressureProblem {
  SparseMatrix A;
  Vector b;
  /// Diagonal used for scaling (A was replaced by D^-1 A); empty when unscaled.
  Vector scaling;
  Grid grid;

  bool scaled() const { return !scaling.empty(); }
};

/// Seven-point finite-volume discretisation of -div(k grad p) = q.
/// Rows of cells with no positive transmissibility become identity rows with
/// zero right-hand side.
PressureProblem assemble_pressure(const PermeabilityField& field, const BoundarySpec& bc,
                                  std::span<const double> q);

/// A' = D^-1 A, b' = D^-1 b with D = diag(A).
PressureProblem diagonal_scale(const PressureProblem& p);

/// Point source or sink at one cell.
struct Well {
  std::size_t ix = 0;
  std::size_t iy = 0;
  std::size_t iz = 0;
  double rate = 0.0;
};

Vector make_source(const Grid& grid, std::span<const Well> wells);

/// Whitespace-separated ASCII reals: kx block, then optional ky and kz blocks
/// of n_c values each. Missing ky/kz default to kx.
PermeabilityField load_field_file(const std::filesystem::path& path, const Grid& grid);
/// Writes all three blocks, one value per line, shortest round-trip format.
void save_field_file(const std::filesystem::path& path, const PermeabilityField& field);

}  // namespace deflate

#endif
