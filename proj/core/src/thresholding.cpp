#include "l0recov/thresholding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace l0recov {

double hard_scalar(double b, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("hard_scalar: threshold must be >= 0");
  return std::abs(b) < t ? 0.0 : b;
}

Vector hard_vector(std::span<const double> x, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("hard_vector: threshold must be >= 0");
  Vector out(x.begin(), x.end());
  for (double& v : out)
    if (std::abs(v) < t) v = 0.0;
  return out;
}

std::vector<std::size_t> top_k_indices(std::span<const double> x, std::size_t k) {
  if (k > x.size()) {
    throw std::invalid_argument("top_k: k = " + std::to_string(k) + " exceeds length " +
                                std::to_string(x.size()));
  }
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const auto before = [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(x[a]);
    const double mb = std::abs(x[b]);
    return ma > mb || (ma == mb && a < b);
  };
  if (k < idx.size()) {
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), before);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Vector top_k(std::span<const double> x, std::size_t k) {
  Vector out(x.size(), 0.0);
  for (std::size_t i : top_k_indices(x, k)) out[i] = x[i];
  return out;
}

Vector soft_vector(std::span<const double> x, double w) {
  if (!(w >= 0.0)) throw std::invalid_argument("soft_vector: weight must be >= 0");
  Vector out(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double m = std::abs(x[i]);
    if (m >= w) out[i] = x[i] - std::copysign(w, x[i]);
  }
  return out;
}

}  // namespace l0recov
