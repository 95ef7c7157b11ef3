#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "l0recov/dense_matrix.hpp"

namespace l0recov {

/// Raised for unreadable, unwritable or malformed matrix/vector files. The
/// message names the file and, for format errors, the byte offset (binary)
/// or line and column (CSV) where the problem was found.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary layout, all little-endian:
//   offset 0   8 bytes   magic "L0RECOV1"
//   offset 8   u64       rows
//   offset 16  u64       cols
//   offset 24  rows*cols IEEE-754 binary64, row-major
// Vectors are stored as N x 1 matrices.
inline constexpr char kBinaryMagic[8] = {'L', '0', 'R', 'E', 'C', 'O', 'V', '1'};

void write_binary(const std::filesystem::path& path, const DenseMatrix& m);
DenseMatrix read_binary(const std::filesystem::path& path);

// CSV: one matrix row per line, comma separated, '.' decimal separator.
// Values are written in shortest round-trip form.
void write_csv(const std::filesystem::path& path, const DenseMatrix& m);
DenseMatrix read_csv(const std::filesystem::path& path);

/// Dispatch on extension: ".csv" uses CSV, anything else the binary format.
void write_matrix(const std::filesystem::path& path, const DenseMatrix& m);
DenseMatrix read_matrix(const std::filesystem::path& path);

void write_vector(const std::filesystem::path& path, std::span<const double> v);
/// Accepts N x 1 and 1 x N files.
Vector read_vector(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double_exact(double v);

}  // namespace l0recov
