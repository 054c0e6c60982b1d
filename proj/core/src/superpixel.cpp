#include "lfd/superpixel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "lfd/error.hpp"
#include "lfd/image_ops.hpp"

namespace lfd {

namespace {

double srgb_to_linear(double v) { return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4); }

double lab_f(double t) {
  constexpr double e = 216.0 / 24389.0, k = 24389.0 / 27.0;
  return t > e ? std::cbrt(t) : (k * t + 16.0) / 116.0;
}

std::array<double, 3> to_lab(const float* px, int channels) {
  double r, g, b;
  if (channels >= 3) {
    r = srgb_to_linear(px[0]);
    g = srgb_to_linear(px[1]);
    b = srgb_to_linear(px[2]);
  } else {
    r = g = b = srgb_to_linear(px[0]);
  }
  const double X = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) / 0.95047;
  const double Y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double Z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / 1.08883;
  const double fx = lab_f(X), fy = lab_f(Y), fz = lab_f(Z);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

struct Center {
  double l, a, b, x, y;
};

/// Relabels 4-connected components, folding those smaller than `min_size`
/// into the previously visited adjacent component.
Array2D<int> enforce_connectivity(const Array2D<int>& labels, int min_size) {
  const int H = labels.height(), W = labels.width();
  Array2D<int> out(H, W, -1);
  std::vector<int> stack, component;
  int next = 0;
  constexpr int dx[4] = {-1, 1, 0, 0}, dy[4] = {0, 0, -1, 1};
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      if (out(y, x) >= 0) continue;
      int adjacent = -1;
      for (int k = 0; k < 4; ++k) {
        const int nx = x + dx[k], ny = y + dy[k];
        if (nx >= 0 && nx < W && ny >= 0 && ny < H && out(ny, nx) >= 0) adjacent = out(ny, nx);
      }
      const int original = labels(y, x);
      component.clear();
      stack.assign(1, y * W + x);
      out(y, x) = next;
      while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        component.push_back(idx);
        const int cy = idx / W, cx = idx % W;
        for (int k = 0; k < 4; ++k) {
          const int nx = cx + dx[k], ny = cy + dy[k];
          if (nx < 0 || nx >= W || ny < 0 || ny >= H) continue;
          if (out(ny, nx) >= 0 || labels(ny, nx) != original) continue;
          out(ny, nx) = next;
          stack.push_back(ny * W + nx);
        }
      }
      if (static_cast<int>(component.size()) < min_size && adjacent >= 0) {
        for (int idx : component) out(idx / W, idx % W) = adjacent;
      } else {
        ++next;
      }
    }
  }
  return out;
}

} // namespace

int default_superpixel_size(int height, int width) { return std::max(height, width) <= 512 ? 15 : 17; }

bool SuperpixelSeg::is_boundary(int y, int x) const {
  const int l = labels(y, x);
  return (x > 0 && labels(y, x - 1) != l) || (x + 1 < labels.width() && labels(y, x + 1) != l) ||
         (y > 0 && labels(y - 1, x) != l) || (y + 1 < labels.height() && labels(y + 1, x) != l);
}

Array2D<int> slic(const Image& img, const SlicParams& params) {
  if (params.size < 1 || params.iterations < 0 || !(params.compactness > 0.0))
    fail(Errc::BadConfig, "superpixel size, iterations and compactness must be positive");
  const int H = img.height, W = img.width, S = params.size;
  std::vector<std::array<double, 3>> lab(static_cast<std::size_t>(H) * W);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) lab[static_cast<std::size_t>(y) * W + x] = to_lab(img.pixel(y, x), img.channels);

  // Grid seeds moved to the lowest-gradient pixel of their 3x3 neighbourhood.
  Array2D<double> lightness(H, W);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) lightness(y, x) = lab[static_cast<std::size_t>(y) * W + x][0];
  const Gradient grad = sobel(lightness);
  std::vector<Center> centers;
  const int gy = std::max(1, H / S), gx = std::max(1, W / S);
  const double sy = static_cast<double>(H) / gy, sx = static_cast<double>(W) / gx;
  for (int j = 0; j < gy; ++j) {
    for (int i = 0; i < gx; ++i) {
      int cx = std::min(W - 1, static_cast<int>(sx * (i + 0.5)));
      int cy = std::min(H - 1, static_cast<int>(sy * (j + 0.5)));
      int bx = cx, by = cy;
      for (int yy = std::max(0, cy - 1); yy <= std::min(H - 1, cy + 1); ++yy)
        for (int xx = std::max(0, cx - 1); xx <= std::min(W - 1, cx + 1); ++xx)
          if (grad.magnitude(yy, xx) < grad.magnitude(by, bx)) bx = xx, by = yy;
      const auto& c = lab[static_cast<std::size_t>(by) * W + bx];
      centers.push_back({c[0], c[1], c[2], static_cast<double>(bx), static_cast<double>(by)});
    }
  }

  const double spatial = params.compactness / S;
  Array2D<int> labels(H, W, 0);
  Array2D<double> dist(H, W);
  for (int iter = 0; iter < std::max(1, params.iterations); ++iter) {
    dist.fill(std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const Center& c = centers[k];
      const int x0 = std::max(0, static_cast<int>(c.x) - S), x1 = std::min(W - 1, static_cast<int>(c.x) + S);
      const int y0 = std::max(0, static_cast<int>(c.y) - S), y1 = std::min(H - 1, static_cast<int>(c.y) + S);
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const auto& p = lab[static_cast<std::size_t>(y) * W + x];
          const double dc = (p[0] - c.l) * (p[0] - c.l) + (p[1] - c.a) * (p[1] - c.a) + (p[2] - c.b) * (p[2] - c.b);
          const double ds = (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y);
          const double d = dc + spatial * spatial * ds;
          if (d < dist(y, x)) {
            dist(y, x) = d;
            labels(y, x) = static_cast<int>(k);
          }
        }
      }
    }
    std::vector<Center> sum(centers.size(), Center{0, 0, 0, 0, 0});
    std::vector<int> count(centers.size(), 0);
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        const int k = labels(y, x);
        const auto& p = lab[static_cast<std::size_t>(y) * W + x];
        sum[k].l += p[0];
        sum[k].a += p[1];
        sum[k].b += p[2];
        sum[k].x += x;
        sum[k].y += y;
        ++count[k];
      }
    }
    for (std::size_t k = 0; k < centers.size(); ++k) {
      if (count[k] == 0) continue;
      const double n = count[k];
      centers[k] = {sum[k].l / n, sum[k].a / n, sum[k].b / n, sum[k].x / n, sum[k].y / n};
    }
  }
  return enforce_connectivity(labels, std::max(1, S * S / 4));
}

SuperpixelSeg build_segmentation(Array2D<int> labels, const Image& img, const Array2D<double>* depth) {
  SuperpixelSeg seg;
  const int H = labels.height(), W = labels.width();
  int max_label = -1;
  for (int v : labels.data()) {
    if (v < 0) fail(Errc::PreconditionViolated, "negative superpixel label");
    max_label = std::max(max_label, v);
  }
  seg.labels = std::move(labels);
  seg.superpixels.resize(static_cast<std::size_t>(max_label + 1));
  for (int k = 0; k <= max_label; ++k) seg.superpixels[k].id = k;
  const Array2D<double> value = hsv_value(img);
  std::vector<double> value_sum(seg.superpixels.size(), 0.0);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const int l = seg.labels(y, x);
      Superpixel& sp = seg.superpixels[l];
      sp.pixels.push_back(y * W + x);
      ++sp.n;
      sp.cx += x;
      sp.cy += y;
      value_sum[l] += value(y, x);
      if (seg.is_boundary(y, x)) sp.boundary.push_back(y * W + x);
      if (x + 1 < W && seg.labels(y, x + 1) != l) {
        sp.neighbors.push_back(seg.labels(y, x + 1));
        seg.superpixels[seg.labels(y, x + 1)].neighbors.push_back(l);
      }
      if (y + 1 < H && seg.labels(y + 1, x) != l) {
        sp.neighbors.push_back(seg.labels(y + 1, x));
        seg.superpixels[seg.labels(y + 1, x)].neighbors.push_back(l);
      }
    }
  }
  for (Superpixel& sp : seg.superpixels) {
    std::sort(sp.neighbors.begin(), sp.neighbors.end());
    sp.neighbors.erase(std::unique(sp.neighbors.begin(), sp.neighbors.end()), sp.neighbors.end());
    if (sp.n > 0) {
      sp.cx /= sp.n;
      sp.cy /= sp.n;
      sp.mean_value = value_sum[sp.id] / sp.n;
    }
  }
  if (depth && depth->height() == H && depth->width() == W) update_mean_depth(seg, *depth);
  return seg;
}

SuperpixelSeg segment_superpixels(const Image& central_view, const SlicParams& params) {
  return build_segmentation(slic(central_view, params), central_view);
}

void update_mean_depth(SuperpixelSeg& seg, const Array2D<double>& depth) {
  if (depth.height() != seg.labels.height() || depth.width() != seg.labels.width())
    fail(Errc::DimensionMismatch, "depth map does not match the segmentation");
  const int W = depth.width();
  for (Superpixel& sp : seg.superpixels) {
    double acc = 0.0;
    for (int idx : sp.pixels) acc += depth(idx / W, idx % W);
    sp.mean_depth = sp.n > 0 ? acc / sp.n : 0.0;
  }
}

} // namespace lfd
