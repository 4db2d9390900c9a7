#ifndef DEFLATE_SPECTRAL_HPP
#define DEFLATE_SPECTRAL_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "deflate/dense.hpp"
#include "deflate/sparse.hpp"

namespace deflate {

struct SpectrumReport {
  /// Ascending by magnitude.
  std::vector<Complex> eigenvalues;
  std::size_t n_small = 0;
  double cutoff = 0.0;
  /// |lambda_{n_small+1}| / |lambda_{n_small}|; NaN when either side is empty.
  double gap_ratio = 0.0;
};

/// Full dense spectrum; refuses matrices larger than `max_n`.
SpectrumReport spectrum(const SparseMatrix& a, double cutoff, std::size_t max_n = 4000);

/// Recounts n_small and the gap ratio for another cutoff.
SpectrumReport recount(SpectrumReport report, double cutoff);

/// Eigenpairs of the `count` smallest-magnitude eigenvalues.
EigenDecomposition smallest_eigenpairs(const SparseMatrix& a, std::size_t count,
                                       std::size_t max_n = 4000);

/// |<u, v>| / (|u| |v|)
double subspace_angle(std::span<const double> u, std::span<const double> v);

/// |P u| / |u| with P the orthogonal projector onto span(basis).
double subspace_overlap(std::span<const double> u, const std::vector<Vector>& basis);

struct Match {
  std::size_t first;
  std::size_t second;
  double cosine;
};

/// Greedy pairing by largest |cos| first; each vector used at most once.
std::vector<Match> greedy_match(const std::vector<Vector>& a, const std::vector<Vector>& b);

/// Header `index,re,im,abs`, one row per eigenvalue.
void write_spectrum_csv(std::ostream& out, const SpectrumReport& report);

}  // namespace deflate

#endif
