#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lfd/array2d.hpp"

namespace lfd {

/// Multi-channel float image, channel-last, indexed (y, x, c).
struct Image {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> data;

  Image() = default;
  Image(int h, int w, int c, float init = 0.0f)
      : height(h), width(w), channels(c),
        data(static_cast<std::size_t>(h) * w * c, init) {}

  float& at(int y, int x, int c) { return data[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
  float at(int y, int x, int c) const { return data[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
  const float* pixel(int y, int x) const { return data.data() + (static_cast<std::size_t>(y) * width + x) * channels; }
  const float* row(int y) const { return data.data() + static_cast<std::size_t>(y) * width * channels; }

  friend bool operator==(const Image&, const Image&) = default;
};

/// Dense two-plane light field L(t, s, y, x, c) with radiance in [0, 1].
/// Views are stored contiguously, each channel-last with x fastest.
class LightField4D {
public:
  LightField4D() = default;
  LightField4D(int n_t, int n_s, int height, int width, int channels, float init = 0.0f);

  int n_t() const noexcept { return n_t_; }
  int n_s() const noexcept { return n_s_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  int center_t() const noexcept { return n_t_ / 2; }
  int center_s() const noexcept { return n_s_ / 2; }
  int view_count() const noexcept { return n_t_ * n_s_; }

  float at(int t, int s, int y, int x, int c) const { return data_[index(t, s, y, x) + c]; }
  float& at(int t, int s, int y, int x, int c) { return data_[index(t, s, y, x) + c]; }

  /// Pointer to the first channel of pixel (y, 0) in view (t, s); `width * channels` floats follow.
  const float* row_ptr(int t, int s, int y) const { return data_.data() + index(t, s, y, 0); }
  float* row_ptr(int t, int s, int y) { return data_.data() + index(t, s, y, 0); }

  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }

  Image view(int t, int s) const;
  void set_view(int t, int s, const Image& img);
  Image central_view() const { return view(center_t(), center_s()); }

  /// Throws OutOfRange when any radiance value is non-finite or outside [0, 1].
  void validate() const;

  friend bool operator==(const LightField4D&, const LightField4D&) = default;

private:
  std::size_t index(int t, int s, int y, int x) const {
    return ((((static_cast<std::size_t>(t) * n_s_ + s) * height_ + y) * width_) + x) * channels_;
  }

  int n_t_ = 0;
  int n_s_ = 0;
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

/// Horizontal epipolar-plane image E_{y,t}(x, s), indexed (s, x, c).
struct Epi {
  int fixed_y = 0;
  int fixed_t = 0;
  int n_s = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> data;

  float at(int s, int x, int c) const { return data[(static_cast<std::size_t>(s) * width + x) * channels + c]; }
};

Epi extract_epi(const LightField4D& lf, int y, int t);

/// Swaps the roles of (s, x) and (t, y): out[t][s][y][x] = in[s][t][x][y].
/// Vertical EPIs of the input become horizontal EPIs of the output.
LightField4D transpose_lf(const LightField4D& lf);

/// Per-pixel disparity over the central view, in pixels per view step.
struct DisparityMap {
  Array2D<double> values;
  Array2D<std::uint8_t> valid;

  DisparityMap() = default;
  DisparityMap(int height, int width, double init = 0.0)
      : values(height, width, init), valid(height, width, 1) {}

  int height() const noexcept { return values.height(); }
  int width() const noexcept { return values.width(); }

  friend bool operator==(const DisparityMap&, const DisparityMap&) = default;
};

enum class GroundTruthSource { File, Synthetic };

struct GroundTruth {
  Array2D<double> disparity;
  GroundTruthSource source = GroundTruthSource::File;
};

} // namespace lfd
