#include "l0recov/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace l0recov {

namespace {

constexpr std::size_t kMaxEllipses = 4096;
constexpr std::size_t kMaxFruitlessEllipses = 256;

struct Ellipse {
  double cx, cy;    // centre, pixel units (column, row)
  double ax, ay;    // semi-axes
  double cos_t, sin_t;

  bool contains(double col, double row) const {
    const double dx = col - cx;
    const double dy = row - cy;
    const double u = dx * cos_t + dy * sin_t;
    const double v = -dx * sin_t + dy * cos_t;
    return (u * u) / (ax * ax) + (v * v) / (ay * ay) <= 1.0;
  }
};

Ellipse random_ellipse(std::size_t side, RngStream& rng) {
  const double s = static_cast<double>(side);
  const double lo = std::max(1.5, 0.06 * s);
  const double hi = std::max(lo + 0.5, 0.35 * s);
  Ellipse e{};
  e.ax = lo + (hi - lo) * rng.uniform();
  e.ay = lo + (hi - lo) * rng.uniform();
  const double reach = std::max(e.ax, e.ay);
  const double c_lo = std::min(reach, 0.5 * (s - 1.0));
  const double c_hi = std::max(c_lo, s - 1.0 - reach);
  e.cx = c_lo + (c_hi - c_lo) * rng.uniform();
  e.cy = c_lo + (c_hi - c_lo) * rng.uniform();
  const double theta = std::numbers::pi * rng.uniform();
  e.cos_t = std::cos(theta);
  e.sin_t = std::sin(theta);
  return e;
}

}  // namespace

Vector ellipse_phantom(std::size_t side, std::size_t target_nnz, RngStream& rng) {
  const std::size_t n = side * side;
  if (target_nnz > n) {
    throw std::invalid_argument("ellipse_phantom: target_nnz = " + std::to_string(target_nnz) +
                                " exceeds " + std::to_string(n) + " pixels");
  }
  Vector image(n, 0.0);
  std::size_t count = 0;
  std::size_t drawn = 0;
  std::size_t fruitless = 0;

  while (count < target_nnz) {
    if (drawn++ >= kMaxEllipses || fruitless >= kMaxFruitlessEllipses) {
      throw std::invalid_argument("ellipse_phantom: unreachable sparsity " +
                                  std::to_string(target_nnz) + " (outlines cover only " +
                                  std::to_string(count) + " pixels)");
    }
    const Ellipse e = random_ellipse(side, rng);
    const double intensity = 0.5 + 0.5 * rng.uniform();

    struct Pixel {
      double angle;
      std::size_t index;
    };
    std::vector<Pixel> outline;
    const auto inside = [&](long r, long c) {
      if (r < 0 || c < 0 || r >= static_cast<long>(side) || c >= static_cast<long>(side)) return false;
      return e.contains(static_cast<double>(c), static_cast<double>(r));
    };
    for (long r = 0; r < static_cast<long>(side); ++r) {
      for (long c = 0; c < static_cast<long>(side); ++c) {
        if (!inside(r, c)) continue;
        const bool edge = !inside(r - 1, c) || !inside(r + 1, c) || !inside(r, c - 1) || !inside(r, c + 1);
        const std::size_t index = static_cast<std::size_t>(r) * side + static_cast<std::size_t>(c);
        if (edge && image[index] == 0.0) {
          outline.push_back({std::atan2(static_cast<double>(r) - e.cy, static_cast<double>(c) - e.cx), index});
        }
      }
    }
    if (outline.empty()) {
      ++fruitless;
      continue;
    }
    fruitless = 0;
    std::sort(outline.begin(), outline.end(), [](const Pixel& a, const Pixel& b) {
      return a.angle < b.angle || (a.angle == b.angle && a.index < b.index);
    });
    const std::size_t take = std::min(outline.size(), target_nnz - count);
    for (std::size_t i = 0; i < take; ++i) image[outline[i].index] = intensity;
    count += take;
  }
  return image;
}

}  // namespace l0recov
