#ifndef DEFLATE_PHYSICS_HPP
#define DEFLATE_PHYSICS_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "deflate/deflation.hpp"
#include "deflate/krylov.hpp"
#include "deflate/testbed.hpp"

namespace deflate {

enum class PartitionKind { Subdomain, Levelset, SubdomainLevelset, Manual };

/// Nonoverlapping labelling of the grid cells, labels in [0, d).
struct Partition {
  std::vector<std::size_t> labels;
  std::size_t d = 0;
  PartitionKind kind = PartitionKind::Manual;
  Grid grid;
  /// Labels left out of the basis unless asked for (zero-permeability
  /// regions, the manual remainder).
  std::vector<std::size_t> excluded;

  /// Cells per label.
  std::vector<std::size_t> counts() const;
};

/// Half-open z range.
using ZRange = std::pair<std::size_t, std::size_t>;

/// Axis-aligned boxes; remainders go to the leading blocks.
Partition subdomain_partition(const Grid& grid, std::size_t px, std::size_t py, std::size_t pz);

/// Gap clustering of log10 permeability (geometric mean of the axes) into
/// bands, then 6-connected components of each band. Components are
/// numbered by their lowest cell index.
Partition levelset_partition(const PermeabilityField& field, double jump_threshold = 2.0);

Partition subdomain_levelset_partition(const PermeabilityField& field, std::size_t px,
                                       std::size_t py, std::size_t pz,
                                       double jump_threshold = 2.0);

/// One label per range in the given order; cells outside all ranges share a
/// trailing remainder label, which is marked excluded.
Partition manual_layers(const Grid& grid, std::span<const ZRange> z_ranges);

/// Band index per cell from 1-D gap clustering; zero cells get band -1.
std::vector<int> permeability_bands(std::span<const double> k, double jump_threshold);

/// Indicator columns for every label not in `p.excluded`.
DeflationBasis partition_to_basis(const Partition& p);
DeflationBasis partition_to_basis(const Partition& p, std::span<const std::size_t> exclude);

/// True when the two labellings describe the same regions.
bool same_regions(std::span<const std::size_t> a, std::span<const std::size_t> b);

/// Deflated GMRES with a basis known before the first iteration.
SolveReport pdgmres(const SparseMatrix& a, std::span<const double> b,
                    std::span<const double> x0, const Preconditioner& m,
                    const GmresOptions& opts, const DeflationBasis& basis,
                    ProjectionOperator choice = ProjectionOperator::A);

/// One label per line, linear cell order.
void write_partition(const std::filesystem::path& path, const Partition& p);
std::vector<std::size_t> read_partition(const std::filesystem::path& path);

}  // namespace deflate

#endif
