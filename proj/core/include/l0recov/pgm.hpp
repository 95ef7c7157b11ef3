#pragma once

#include <cstddef>
#include <filesystem>
#include <span>

namespace l0recov {

/// Binary 8-bit PGM (P5). Pixel = round(255 * clamp(v / max_value, 0, 1)).
void write_pgm(const std::filesystem::path& path, std::span<const double> pixels, std::size_t width,
               std::size_t height, double max_value);

}  // namespace l0recov
