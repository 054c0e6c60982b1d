#include "lfd/light_field.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "lfd/error.hpp"

namespace lfd {

LightField4D::LightField4D(int n_t, int n_s, int height, int width, int channels, float init)
    : n_t_(n_t), n_s_(n_s), height_(height), width_(width), channels_(channels) {
  if (n_t < 1 || n_s < 1 || height < 1 || width < 1 || (channels != 1 && channels != 3)) {
    fail(Errc::PreconditionViolated, "light field dimensions must be positive with 1 or 3 channels");
  }
  data_.assign(static_cast<std::size_t>(n_t) * n_s * height * width * channels, init);
}

Image LightField4D::view(int t, int s) const {
  Image img(height_, width_, channels_);
  const float* src = row_ptr(t, s, 0);
  std::memcpy(img.data.data(), src, img.data.size() * sizeof(float));
  return img;
}

void LightField4D::set_view(int t, int s, const Image& img) {
  if (img.height != height_ || img.width != width_ || img.channels != channels_) {
    fail(Errc::InconsistentDimensions, "view size does not match light field");
  }
  std::memcpy(row_ptr(t, s, 0), img.data.data(), img.data.size() * sizeof(float));
}

void LightField4D::validate() const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const float v = data_[i];
    if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
      fail(Errc::OutOfRange, "radiance value " + std::to_string(v) + " at flat index " + std::to_string(i));
    }
  }
}

Epi extract_epi(const LightField4D& lf, int y, int t) {
  if (y < 0 || y >= lf.height() || t < 0 || t >= lf.n_t()) {
    fail(Errc::OutOfRange, "EPI index (y=" + std::to_string(y) + ", t=" + std::to_string(t) + ") outside light field");
  }
  Epi epi;
  epi.fixed_y = y;
  epi.fixed_t = t;
  epi.n_s = lf.n_s();
  epi.width = lf.width();
  epi.channels = lf.channels();
  const std::size_t row_len = static_cast<std::size_t>(lf.width()) * lf.channels();
  epi.data.resize(row_len * lf.n_s());
  for (int s = 0; s < lf.n_s(); ++s) {
    std::memcpy(epi.data.data() + s * row_len, lf.row_ptr(t, s, y), row_len * sizeof(float));
  }
  return epi;
}

LightField4D transpose_lf(const LightField4D& lf) {
  LightField4D out(lf.n_s(), lf.n_t(), lf.width(), lf.height(), lf.channels());
  const int C = lf.channels();
  for (int t = 0; t < out.n_t(); ++t) {
    for (int s = 0; s < out.n_s(); ++s) {
      for (int y = 0; y < out.height(); ++y) {
        float* dst = out.row_ptr(t, s, y);
        for (int x = 0; x < out.width(); ++x) {
          for (int c = 0; c < C; ++c) dst[x * C + c] = lf.at(s, t, x, y, c);
        }
      }
    }
  }
  return out;
}

} // namespace lfd
