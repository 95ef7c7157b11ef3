#include "l0recov/matrix_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace l0recov {

namespace {

constexpr std::size_t kHeaderBytes = 24;

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((v >> (8 * b)) & 0xFF);
  out.write(bytes.data(), 8);
}

std::uint64_t get_u64(const char* p) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[b])) << (8 * b);
  return v;
}

std::string where(const std::filesystem::path& path) { return path.string(); }

bool has_csv_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".csv";
}

}  // namespace

std::string format_double_exact(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_binary(const std::filesystem::path& path, const DenseMatrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(where(path) + ": cannot open for writing");
  out.write(kBinaryMagic, sizeof(kBinaryMagic));
  put_u64(out, m.rows());
  put_u64(out, m.cols());
  for (double v : m.entries()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw IoError(where(path) + ": write failed");
}

DenseMatrix read_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(where(path) + ": cannot open for reading");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (bytes.size() < sizeof(kBinaryMagic)) {
    throw FormatError(where(path) + ": truncated at byte offset " + std::to_string(bytes.size()) +
                      " while reading magic (need 8 bytes)");
  }
  for (std::size_t i = 0; i < sizeof(kBinaryMagic); ++i) {
    if (bytes[i] != kBinaryMagic[i]) {
      throw FormatError(where(path) + ": bad magic at byte offset " + std::to_string(i) +
                        " (expected \"L0RECOV1\")");
    }
  }
  if (bytes.size() < kHeaderBytes) {
    throw FormatError(where(path) + ": truncated at byte offset " + std::to_string(bytes.size()) +
                      " while reading dimensions (need 24 header bytes)");
  }
  const std::uint64_t rows = get_u64(bytes.data() + 8);
  const std::uint64_t cols = get_u64(bytes.data() + 16);
  const std::uint64_t payload = bytes.size() - kHeaderBytes;
  if (cols != 0 && rows > payload / 8 / cols) {
    throw FormatError(where(path) + ": truncated at byte offset " + std::to_string(bytes.size()) +
                      ": header at byte offset 8 declares " + std::to_string(rows) + "x" +
                      std::to_string(cols) + " values");
  }
  const std::uint64_t count = rows * cols;
  if (payload != count * 8) {
    throw FormatError(where(path) + ": " + std::to_string(payload - count * 8) +
                      " trailing bytes after byte offset " + std::to_string(kHeaderBytes + count * 8));
  }
  std::vector<double> entries(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    entries[i] = std::bit_cast<double>(get_u64(bytes.data() + kHeaderBytes + 8 * i));
    if (!std::isfinite(entries[i])) {
      throw FormatError(where(path) + ": non-finite value at byte offset " +
                        std::to_string(kHeaderBytes + 8 * i));
    }
  }
  return DenseMatrix(rows, cols, std::move(entries));
}

void write_csv(const std::filesystem::path& path, const DenseMatrix& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(where(path) + ": cannot open for writing");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << format_double_exact(row[j]);
    }
    out << '\n';
  }
  if (!out) throw IoError(where(path) + ": write failed");
}

DenseMatrix read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(where(path) + ": cannot open for reading");
  std::vector<double> entries;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t fields = 0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (true) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc() || !std::isfinite(v)) {
        throw FormatError(where(path) + ": line " + std::to_string(line_no) + ", column " +
                          std::to_string(p - line.data() + 1) + ": expected a finite number");
      }
      entries.push_back(v);
      ++fields;
      p = res.ptr;
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p == end) break;
      if (*p != ',') {
        throw FormatError(where(path) + ": line " + std::to_string(line_no) + ", column " +
                          std::to_string(p - line.data() + 1) + ": expected ','");
      }
      ++p;
    }
    if (rows == 0) {
      cols = fields;
    } else if (fields != cols) {
      throw FormatError(where(path) + ": line " + std::to_string(line_no) + " has " +
                        std::to_string(fields) + " fields, expected " + std::to_string(cols));
    }
    ++rows;
  }
  return DenseMatrix(rows, cols, std::move(entries));
}

void write_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
  has_csv_extension(path) ? write_csv(path, m) : write_binary(path, m);
}

DenseMatrix read_matrix(const std::filesystem::path& path) {
  return has_csv_extension(path) ? read_csv(path) : read_binary(path);
}

void write_vector(const std::filesystem::path& path, std::span<const double> v) {
  write_matrix(path, DenseMatrix(v.size(), 1, Vector(v.begin(), v.end())));
}

Vector read_vector(const std::filesystem::path& path) {
  DenseMatrix m = read_matrix(path);
  if (m.cols() != 1 && m.rows() != 1) {
    throw FormatError(where(path) + ": expected a vector, found a " + std::to_string(m.rows()) +
                      "x" + std::to_string(m.cols()) + " matrix");
  }
  return Vector(m.entries().begin(), m.entries().end());
}

}  // namespace l0recov
