#ifndef DEFLATE_IO_HPP
#define DEFLATE_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "deflate/sparse.hpp"

namespace deflate::io {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Strict parse of a whole token; throws FormatError.
double parse_double(std::string_view token);
std::size_t parse_index(std::string_view token);

/// All whitespace-separated reals in a file.
Vector read_reals(const std::filesystem::path& path);

/// Coordinate Matrix Market: header, `n n nnz`, then 1-based `i j v` lines.
void write_matrix_market(std::ostream& out, const SparseMatrix& a);
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a);
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::filesystem::path& path);

/// Plain vector file: one value per line.
void write_vector(const std::filesystem::path& path, const Vector& v);
Vector read_vector(const std::filesystem::path& path);

std::ofstream open_output(const std::filesystem::path& path);

}  // namespace deflate::io

#endif
