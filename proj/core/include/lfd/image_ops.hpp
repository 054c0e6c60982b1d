#pragma once

#include <cstdint>

#include "lfd/array2d.hpp"
#include "lfd/light_field.hpp"

namespace lfd {

/// Channel mean.
Array2D<double> to_gray(const Image& img);

/// HSV value channel, max(R, G, B).
Array2D<double> hsv_value(const Image& img);

/// Separable Gaussian blur with clamped borders.
Array2D<double> gaussian_blur(const Array2D<double>& img, double sigma);

struct Gradient {
  Array2D<double> gx, gy, magnitude;
};

/// 3x3 Sobel derivatives (clamped borders), normalized by 1/8 so a unit ramp
/// has unit gradient.
Gradient sobel(const Array2D<double>& img);

struct CannyParams {
  double sigma = 1.0;
  double low_ratio = 0.1;  // fraction of the maximum gradient magnitude
  double high_ratio = 0.2;
};

/// Canny edges with thresholds relative to the image's maximum gradient, so
/// the mask is invariant to uniform intensity scaling.
Array2D<std::uint8_t> canny(const Array2D<double>& gray, const CannyParams& params = {});

/// Square (Chebyshev) dilation by `radius` pixels.
Array2D<std::uint8_t> dilate(const Array2D<std::uint8_t>& mask, int radius);

} // namespace lfd
