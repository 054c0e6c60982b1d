#include "lfd/sampling.hpp"

#include <cmath>

namespace lfd {

std::optional<double> sample_bilinear(std::span<const float> row, double x) {
  double v = 0.0;
  if (!sample_row(row.data(), static_cast<int>(row.size()), 1, x, &v)) return std::nullopt;
  return v;
}

bool sample_row(const float* row, int width, int channels, double x, double* out) {
  if (!(x >= 0.0) || x > static_cast<double>(width - 1)) return false;
  const int x0 = static_cast<int>(x);
  const double f = x - x0;
  const float* a = row + static_cast<std::ptrdiff_t>(x0) * channels;
  if (f == 0.0) {
    for (int c = 0; c < channels; ++c) out[c] = a[c];
    return true;
  }
  const float* b = a + channels;
  for (int c = 0; c < channels; ++c) out[c] = (1.0 - f) * a[c] + f * b[c];
  return true;
}

bool sample_image(const Image& img, double x, double y, double* out) {
  if (!(y >= 0.0) || y > static_cast<double>(img.height - 1)) return false;
  if (!(x >= 0.0) || x > static_cast<double>(img.width - 1)) return false;
  const int y0 = static_cast<int>(y);
  const double fy = y - y0;
  double top[4];
  sample_row(img.row(y0), img.width, img.channels, x, top);
  if (fy == 0.0) {
    for (int c = 0; c < img.channels; ++c) out[c] = top[c];
    return true;
  }
  double bottom[4];
  sample_row(img.row(y0 + 1), img.width, img.channels, x, bottom);
  for (int c = 0; c < img.channels; ++c) out[c] = (1.0 - fy) * top[c] + fy * bottom[c];
  return true;
}

} // namespace lfd
