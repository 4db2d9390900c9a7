#include "deflate/physics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <string>

#include "deflate/errors.hpp"
#include "deflate/io.hpp"

namespace deflate {

namespace {

std::vector<std::size_t> block_of(std::size_t n, std::size_t p) {
  std::vector<std::size_t> out(n);
  const std::size_t base = n / p;
  const std::size_t rem = n % p;
  std::size_t i = 0;
  for (std::size_t blk = 0; blk < p; ++blk) {
    std::size_t len = base + (blk < rem ? 1 : 0);
    for (std::size_t k = 0; k < len; ++k) out[i++] = blk;
  }
  return out;
}

void check_boxes(const Grid& grid, std::size_t px, std::size_t py, std::size_t pz) {
  grid.validate();
  if (px == 0 || py == 0 || pz == 0) throw InvalidArgument("subdomain counts must be >= 1");
  if (px > grid.nx || py > grid.ny || pz > grid.nz) {
    throw InvalidArgument("more subdomains than cells along an axis (" + std::to_string(px) + "x" +
                          std::to_string(py) + "x" + std::to_string(pz) + " on " +
                          std::to_string(grid.nx) + "x" + std::to_string(grid.ny) + "x" +
                          std::to_string(grid.nz) + ")");
  }
}

Vector cell_permeability(const PermeabilityField& f) {
  const std::size_t n = f.grid.cells();
  if (f.kx.size() != n || f.ky.size() != n || f.kz.size() != n) {
    throw DimensionMismatch("permeability field does not match grid");
  }
  Vector k(n);
  for (std::size_t c = 0; c < n; ++c) {
    if (f.kx[c] < 0.0 || f.ky[c] < 0.0 || f.kz[c] < 0.0 || std::isnan(f.kx[c] + f.ky[c] + f.kz[c])) {
      throw InvalidArgument("levelset: invalid permeability in cell " + std::to_string(c));
    }
    k[c] = std::cbrt(f.kx[c] * f.ky[c] * f.kz[c]);
  }
  return k;
}

// Connected components of equal band inside `mask`, numbered from `first`
// in order of lowest cell index. Returns the number of components.
std::size_t label_components(const Grid& g, const std::vector<int>& band,
                             const std::vector<char>& mask, std::size_t first,
                             std::vector<std::size_t>& labels, std::vector<std::size_t>& excluded) {
  const std::size_t n = g.cells();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::size_t next = first;
  std::deque<std::size_t> queue;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (!mask[seed] || labels[seed] != unset) continue;
    const std::size_t id = next++;
    if (band[seed] < 0) excluded.push_back(id);
    labels[seed] = id;
    queue.push_back(seed);
    while (!queue.empty()) {
      std::size_t c = queue.front();
      queue.pop_front();
      auto [ix, iy, iz] = g.coords(c);
      std::size_t nb[6];
      std::size_t count = 0;
      if (ix > 0) nb[count++] = c - 1;
      if (ix + 1 < g.nx) nb[count++] = c + 1;
      if (iy > 0) nb[count++] = c - g.nx;
      if (iy + 1 < g.ny) nb[count++] = c + g.nx;
      if (iz > 0) nb[count++] = c - g.nx * g.ny;
      if (iz + 1 < g.nz) nb[count++] = c + g.nx * g.ny;
      for (std::size_t k = 0; k < count; ++k) {
        std::size_t o = nb[k];
        if (mask[o] && labels[o] == unset && band[o] == band[seed]) {
          labels[o] = id;
          queue.push_back(o);
        }
      }
    }
  }
  return next - first;
}

}  // namespace

std::vector<std::size_t> Partition::counts() const {
  std::vector<std::size_t> c(d, 0);
  for (auto l : labels) ++c.at(l);
  return c;
}

Partition subdomain_partition(const Grid& grid, std::size_t px, std::size_t py, std::size_t pz) {
  check_boxes(grid, px, py, pz);
  auto bx = block_of(grid.nx, px);
  auto by = block_of(grid.ny, py);
  auto bz = block_of(grid.nz, pz);
  Partition p;
  p.grid = grid;
  p.kind = PartitionKind::Subdomain;
  p.d = px * py * pz;
  p.labels.resize(grid.cells());
  for (std::size_t iz = 0; iz < grid.nz; ++iz) {
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
      for (std::size_t ix = 0; ix < grid.nx; ++ix) {
        p.labels[grid.index(ix, iy, iz)] = bx[ix] + px * (by[iy] + py * bz[iz]);
      }
    }
  }
  return p;
}

std::vector<int> permeability_bands(std::span<const double> k, double jump_threshold) {
  if (!(jump_threshold > 0.0)) throw InvalidArgument("jump_threshold must be positive");
  std::vector<double> logs;
  logs.reserve(k.size());
  for (double v : k) {
    if (v < 0.0) throw InvalidArgument("negative permeability");
    if (v > 0.0) logs.push_back(std::log10(v));
  }
  std::sort(logs.begin(), logs.end());
  logs.erase(std::unique(logs.begin(), logs.end()), logs.end());
  // Band starts: first value and every value preceded by a large gap.
  std::vector<double> starts;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    if (i == 0 || logs[i] - logs[i - 1] >= jump_threshold) starts.push_back(logs[i]);
  }
  std::vector<int> band(k.size(), -1);
  for (std::size_t c = 0; c < k.size(); ++c) {
    if (k[c] == 0.0) continue;
    double lv = std::log10(k[c]);
    auto it = std::upper_bound(starts.begin(), starts.end(), lv);
    band[c] = static_cast<int>(it - starts.begin()) - 1;
  }
  return band;
}

Partition levelset_partition(const PermeabilityField& field, double jump_threshold) {
  field.grid.validate();
  Vector k = cell_permeability(field);
  auto band = permeability_bands(k, jump_threshold);
  Partition p;
  p.grid = field.grid;
  p.kind = PartitionKind::Levelset;
  p.labels.assign(k.size(), static_cast<std::size_t>(-1));
  std::vector<char> mask(k.size(), 1);
  p.d = label_components(field.grid, band, mask, 0, p.labels, p.excluded);
  return p;
}

Partition subdomain_levelset_partition(const PermeabilityField& field, std::size_t px,
                                       std::size_t py, std::size_t pz, double jump_threshold) {
  const Grid& g = field.grid;
  Partition boxes = subdomain_partition(g, px, py, pz);
  Vector k = cell_permeability(field);
  Partition p;
  p.grid = g;
  p.kind = PartitionKind::SubdomainLevelset;
  p.labels.assign(k.size(), static_cast<std::size_t>(-1));
  std::vector<int> band(k.size(), -1);
  std::vector<char> mask(k.size(), 0);
  for (std::size_t box = 0; box < boxes.d; ++box) {
    Vector kb;
    std::vector<std::size_t> cells;
    for (std::size_t c = 0; c < k.size(); ++c) {
      if (boxes.labels[c] == box) {
        cells.push_back(c);
        kb.push_back(k[c]);
      }
    }
    auto local = permeability_bands(kb, jump_threshold);
    std::fill(mask.begin(), mask.end(), 0);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      band[cells[i]] = local[i];
      mask[cells[i]] = 1;
    }
    p.d += label_components(g, band, mask, p.d, p.labels, p.excluded);
  }
  return p;
}

Partition manual_layers(const Grid& grid, std::span<const ZRange> z_ranges) {
  grid.validate();
  if (z_ranges.empty()) throw InvalidArgument("manual_layers: no ranges given");
  std::vector<ZRange> sorted(z_ranges.begin(), z_ranges.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& [lo, hi] = sorted[i];
    if (lo >= hi) throw InvalidArgument("manual_layers: empty range " + std::to_string(lo) + ":" + std::to_string(hi));
    if (hi > grid.nz) throw InvalidArgument("manual_layers: range end " + std::to_string(hi) + " exceeds nz");
    if (i > 0 && lo < sorted[i - 1].second) {
      throw InvalidArgument("manual_layers: overlapping ranges at z=" + std::to_string(lo));
    }
  }
  const std::size_t plane = grid.nx * grid.ny;
  const std::size_t remainder = z_ranges.size();
  Partition p;
  p.grid = grid;
  p.kind = PartitionKind::Manual;
  p.labels.assign(grid.cells(), remainder);
  for (std::size_t l = 0; l < z_ranges.size(); ++l) {
    for (std::size_t c = z_ranges[l].first * plane; c < z_ranges[l].second * plane; ++c) p.labels[c] = l;
  }
  p.d = z_ranges.size();
  if (std::count(p.labels.begin(), p.labels.end(), remainder) > 0) {
    p.d += 1;
    p.excluded.push_back(remainder);
  }
  return p;
}

DeflationBasis partition_to_basis(const Partition& p) { return partition_to_basis(p, p.excluded); }

DeflationBasis partition_to_basis(const Partition& p, std::span<const std::size_t> exclude) {
  const std::size_t n = p.labels.size();
  std::vector<std::vector<std::size_t>> members(p.d);
  for (std::size_t c = 0; c < n; ++c) {
    if (p.labels[c] >= p.d) throw InvalidArgument("partition label out of range at cell " + std::to_string(c));
    members[p.labels[c]].push_back(c);
  }
  DeflationBasis z(n);
  for (std::size_t l = 0; l < p.d; ++l) {
    if (std::find(exclude.begin(), exclude.end(), l) != exclude.end()) continue;
    if (members[l].empty()) throw InvalidArgument("partition label " + std::to_string(l) + " is unused");
    Vector ones(members[l].size(), 1.0);
    z.add_sparse(std::move(members[l]), std::move(ones));
  }
  if (z.d() == 0) throw InvalidArgument("partition_to_basis: no deflation vectors left after exclusion");
  return z;
}

bool same_regions(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) return false;
  std::map<std::size_t, std::size_t> ab;
  std::map<std::size_t, std::size_t> ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [it1, new1] = ab.emplace(a[i], b[i]);
    auto [it2, new2] = ba.emplace(b[i], a[i]);
    if (it1->second != b[i] || it2->second != a[i]) return false;
  }
  return true;
}

SolveReport pdgmres(const SparseMatrix& a, std::span<const double> b,
                    std::span<const double> x0, const Preconditioner& m,
                    const GmresOptions& opts, const DeflationBasis& basis,
                    ProjectionOperator choice) {
  auto t0 = std::chrono::steady_clock::now();
  DeflationContext ctx = build_context(a, m, basis, b, choice);
  double setup = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  SolveReport rep = gmres(a, b, x0, m, opts, &ctx);
  rep.setup_ms = setup;
  return rep;
}

void write_partition(const std::filesystem::path& path, const Partition& p) {
  auto out = io::open_output(path);
  for (auto l : p.labels) out << l << '\n';
}

std::vector<std::size_t> read_partition(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open partition file " + path.string());
  std::vector<std::size_t> labels;
  std::string tok;
  while (in >> tok) labels.push_back(io::parse_index(tok));
  return labels;
}

}  // namespace deflate
