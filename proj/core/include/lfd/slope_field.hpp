#pragma once

#include <cstdint>

#include "lfd/array2d.hpp"
#include "lfd/light_field.hpp"

namespace lfd {

/// Side on which a nearer occluder sits relative to the pixel.
enum class Occlusion : std::uint8_t { None = 0, Left, Right, Up, Down };

const char* to_string(Occlusion o);

/// Per-pixel disparity with its cost-curve confidence (mean/min, >= 1 where
/// defined, 0 where undefined), the local sharpness of the cost minimum, and
/// the occlusion category assigned by the occlusion stage.
struct SlopeField {
  DisparityMap disparity;
  Array2D<double> confidence;
  Array2D<double> sharpness;
  Array2D<Occlusion> occlusion;

  SlopeField() = default;
  SlopeField(int height, int width)
      : disparity(height, width), confidence(height, width, 0.0), sharpness(height, width, 0.0),
        occlusion(height, width, Occlusion::None) {}

  int height() const noexcept { return disparity.height(); }
  int width() const noexcept { return disparity.width(); }

  friend bool operator==(const SlopeField&, const SlopeField&) = default;
};

} // namespace lfd
