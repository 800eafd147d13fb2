#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "sylnet/dense_matrix.hpp"

namespace sylnet {

/// Text format used repo-wide: first line "rows cols", then one line per
/// row with space-separated entries printed to 17 significant digits
/// (round-trips bit-exactly).
void write_matrix(std::ostream& os, const DenseMatrix& m);
void write_matrix(const std::filesystem::path& path, const DenseMatrix& m);

DenseMatrix read_matrix(std::istream& is);
DenseMatrix read_matrix(const std::filesystem::path& path);

/// Shortest decimal form that parses back to the same double (17
/// significant digits).
std::string format_double(double v);

} // namespace sylnet
