#include "lfd/image_ops.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lfd {

Array2D<double> to_gray(const Image& img) {
  Array2D<double> out(img.height, img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int c = 0; c < img.channels; ++c) acc += img.at(y, x, c);
      out(y, x) = acc / img.channels;
    }
  }
  return out;
}

Array2D<double> hsv_value(const Image& img) {
  Array2D<double> out(img.height, img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double v = img.at(y, x, 0);
      for (int c = 1; c < img.channels; ++c) v = std::max(v, static_cast<double>(img.at(y, x, c)));
      out(y, x) = v;
    }
  }
  return out;
}

Array2D<double> gaussian_blur(const Array2D<double>& img, double sigma) {
  if (sigma <= 0.0) return img;
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double norm = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    norm += kernel[i + radius];
  }
  for (double& k : kernel) k /= norm;

  const int H = img.height(), W = img.width();
  Array2D<double> tmp(H, W), out(H, W);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) acc += kernel[i + radius] * img(y, std::clamp(x + i, 0, W - 1));
      tmp(y, x) = acc;
    }
  }
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) acc += kernel[i + radius] * tmp(std::clamp(y + i, 0, H - 1), x);
      out(y, x) = acc;
    }
  }
  return out;
}

Gradient sobel(const Array2D<double>& img) {
  const int H = img.height(), W = img.width();
  Gradient g{Array2D<double>(H, W), Array2D<double>(H, W), Array2D<double>(H, W)};
  auto at = [&](int y, int x) { return img(std::clamp(y, 0, H - 1), std::clamp(x, 0, W - 1)); };
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const double gx = (at(y - 1, x + 1) + 2.0 * at(y, x + 1) + at(y + 1, x + 1)) -
                        (at(y - 1, x - 1) + 2.0 * at(y, x - 1) + at(y + 1, x - 1));
      const double gy = (at(y + 1, x - 1) + 2.0 * at(y + 1, x) + at(y + 1, x + 1)) -
                        (at(y - 1, x - 1) + 2.0 * at(y - 1, x) + at(y - 1, x + 1));
      g.gx(y, x) = gx / 8.0;
      g.gy(y, x) = gy / 8.0;
      g.magnitude(y, x) = std::hypot(gx, gy) / 8.0;
    }
  }
  return g;
}

Array2D<std::uint8_t> canny(const Array2D<double>& gray, const CannyParams& params) {
  const int H = gray.height(), W = gray.width();
  Array2D<std::uint8_t> edges(H, W, 0);
  const Gradient g = sobel(gaussian_blur(gray, params.sigma));
  const double max_mag = *std::max_element(g.magnitude.data().begin(), g.magnitude.data().end());
  if (!(max_mag > 1e-12)) return edges;
  const double high = params.high_ratio * max_mag;
  const double low = params.low_ratio * max_mag;

  // Non-maximum suppression along the quantized gradient direction.
  Array2D<double> thin(H, W, 0.0);
  for (int y = 1; y + 1 < H; ++y) {
    for (int x = 1; x + 1 < W; ++x) {
      const double m = g.magnitude(y, x);
      if (m < low) continue;
      double angle = std::atan2(g.gy(y, x), g.gx(y, x)) * 180.0 / M_PI;
      if (angle < 0) angle += 180.0;
      int dx = 1, dy = 0;
      if (angle >= 22.5 && angle < 67.5) {
        dx = 1; dy = 1;
      } else if (angle >= 67.5 && angle < 112.5) {
        dx = 0; dy = 1;
      } else if (angle >= 112.5 && angle < 157.5) {
        dx = -1; dy = 1;
      }
      if (m >= g.magnitude(y + dy, x + dx) && m > g.magnitude(y - dy, x - dx)) thin(y, x) = m;
    }
  }

  // Hysteresis: grow strong edges through weak ones (8-connected).
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      if (thin(y, x) >= high && !edges(y, x)) {
        edges(y, x) = 1;
        stack.emplace_back(y, x);
      }
    }
  }
  while (!stack.empty()) {
    const auto [y, x] = stack.back();
    stack.pop_back();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int ny = y + dy, nx = x + dx;
        if (!edges.contains(ny, nx) || edges(ny, nx) || thin(ny, nx) < low || thin(ny, nx) == 0.0) continue;
        edges(ny, nx) = 1;
        stack.emplace_back(ny, nx);
      }
    }
  }
  return edges;
}

Array2D<std::uint8_t> dilate(const Array2D<std::uint8_t>& mask, int radius) {
  const int H = mask.height(), W = mask.width();
  Array2D<std::uint8_t> rows(H, W, 0), out(H, W, 0);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      for (int i = std::max(0, x - radius); i <= std::min(W - 1, x + radius) && !rows(y, x); ++i) {
        if (mask(y, i)) rows(y, x) = 1;
      }
    }
  }
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      for (int i = std::max(0, y - radius); i <= std::min(H - 1, y + radius) && !out(y, x); ++i) {
        if (rows(i, x)) out(y, x) = 1;
      }
    }
  }
  return out;
}

} // namespace lfd
