#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace l0recov {

/// Real vector used for signals (length N) and measurements (length M).
using Vector = std::vector<double>;

/// Dense M x N real matrix, row-major, double precision.
///
/// Every entry is finite; the constructors reject NaN and Inf. Instances are
/// immutable through the const interface and safe to share across threads.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  /// Zero-filled matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of row-major `entries`; size must equal rows * cols.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> values);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return entries_.empty(); }

  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }
  /// Copy of column j (A_j in the column-wise view of A).
  Vector column(std::size_t j) const;

  std::span<const double> entries() const { return entries_; }

  DenseMatrix transposed() const;
  DenseMatrix scaled(double factor) const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

// Vector helpers shared across modules.
double dot(std::span<const double> a, std::span<const double> b);
double norm2_sq(std::span<const double> a);
double norm2(std::span<const double> a);
double norm1(std::span<const double> a);
double max_abs(std::span<const double> a);
/// Number of entries that are exactly nonzero.
std::size_t count_nonzero(std::span<const double> a);
bool all_finite(std::span<const double> a);
/// out[i] = a[i] - b[i]
Vector subtract(std::span<const double> a, std::span<const double> b);
/// ||a - b||_2^2
double distance_sq(std::span<const double> a, std::span<const double> b);

}  // namespace l0recov
