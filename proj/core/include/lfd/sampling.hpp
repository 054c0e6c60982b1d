#pragma once

#include <optional>
#include <span>

#include "lfd/light_field.hpp"

namespace lfd {

/// Linear interpolation along a single-channel row. Exact at integer
/// coordinates; std::nullopt ("outside") when x is not within [0, size-1].
std::optional<double> sample_bilinear(std::span<const float> row, double x);

/// Multi-channel variant over a channel-last row of `width` pixels. Writes
/// `channels` values to `out` and returns false when x is outside.
bool sample_row(const float* row, int width, int channels, double x, double* out);

/// Bilinear sample of an image at (x, y); false when outside the pixel grid.
bool sample_image(const Image& img, double x, double y, double* out);

} // namespace lfd
