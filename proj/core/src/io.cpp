#include "deflate/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "deflate/errors.hpp"

namespace deflate::io {

std::string format_double(double v) {
  char buf[64];
  auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

double parse_double(std::string_view token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw FormatError("not a real number: '" + std::string(token) + "'");
  }
  return v;
}

std::size_t parse_index(std::string_view token) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw FormatError("not a nonnegative integer: '" + std::string(token) + "'");
  }
  return v;
}

Vector read_reals(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  Vector out;
  std::string token;
  while (in >> token) out.push_back(parse_double(token));
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  return out;
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.n() << ' ' << a.n() << ' ' << a.nnz() << '\n';
  auto offsets = a.row_offsets();
  auto cols = a.col_indices();
  auto vals = a.values();
  for (std::size_t i = 0; i < a.n(); ++i) {
    for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) {
      out << (i + 1) << ' ' << (cols[p] + 1) << ' ' << format_double(vals[p]) << '\n';
    }
  }
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a) {
  auto out = open_output(path);
  write_matrix_market(out, a);
}

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0) {
    throw FormatError("missing %%MatrixMarket header");
  }
  if (line.find("coordinate") == std::string::npos || line.find("real") == std::string::npos) {
    throw FormatError("only 'coordinate real' Matrix Market files are supported");
  }
  bool symmetric = line.find("symmetric") != std::string::npos;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream header(line);
  std::string t_rows, t_cols, t_nnz;
  if (!(header >> t_rows >> t_cols >> t_nnz)) throw FormatError("bad size line: " + line);
  std::size_t rows = parse_index(t_rows);
  std::size_t cols = parse_index(t_cols);
  std::size_t nnz = parse_index(t_nnz);
  if (rows != cols) throw FormatError("matrix must be square");
  std::vector<Triplet> entries;
  entries.reserve(symmetric ? 2 * nnz : nnz);
  std::string ti, tj, tv;
  for (std::size_t k = 0; k < nnz; ++k) {
    if (!(in >> ti >> tj >> tv)) throw FormatError("truncated Matrix Market entry list");
    std::size_t i = parse_index(ti);
    std::size_t j = parse_index(tj);
    if (i == 0 || j == 0 || i > rows || j > rows) throw FormatError("entry index out of range");
    double v = parse_double(tv);
    entries.push_back({i - 1, j - 1, v});
    if (symmetric && i != j) entries.push_back({j - 1, i - 1, v});
  }
  return SparseMatrix::from_triplets(rows, std::move(entries));
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_matrix_market(in);
}

void write_vector(const std::filesystem::path& path, const Vector& v) {
  auto out = open_output(path);
  for (double x : v) out << format_double(x) << '\n';
}

Vector read_vector(const std::filesystem::path& path) { return read_reals(path); }

}  // namespace deflate::io
