#pragma once

#include <cstddef>

#include "l0recov/dense_matrix.hpp"
#include "l0recov/rng.hpp"

namespace l0recov {

/// Sparse side x side test image (row-major) made of one-pixel-wide ellipse
/// outlines with positive intensities, in the style of boundary-enhanced
/// phase-contrast tomography phantoms.
///
/// Ellipses are drawn with random centre, semi-axes, rotation and an
/// intensity in [0.5, 1). Each outline adds only pixels not already set,
/// walked in angular order around the ellipse centre; the last ellipse is cut
/// short so that exactly `target_nnz` pixels are nonzero. Throws
/// std::invalid_argument when target_nnz exceeds side^2 or cannot be reached
/// by outlines.
Vector ellipse_phantom(std::size_t side, std::size_t target_nnz, RngStream& rng);

}  // namespace l0recov
