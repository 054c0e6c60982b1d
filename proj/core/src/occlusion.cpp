#include "lfd/occlusion.hpp"

#include <algorithm>
#include <cmath>

#include "lfd/parallel.hpp"

namespace lfd {

namespace {

double window_mean(const Array2D<double>& d, int cx, int cy, int radius) {
  cx = std::clamp(cx, 0, d.width() - 1);
  cy = std::clamp(cy, 0, d.height() - 1);
  double acc = 0.0;
  int count = 0;
  for (int y = cy - radius; y <= cy + radius; ++y) {
    for (int x = cx - radius; x <= cx + radius; ++x) {
      acc += d(std::clamp(y, 0, d.height() - 1), std::clamp(x, 0, d.width() - 1));
      ++count;
    }
  }
  return acc / count;
}

/// Half A refocused at its own best disparity; flagged when half B disagrees
/// there by more than the configured ratio.
bool half_disagrees(const CostCurve& a, const CostCurve& b, const OcclusionConfig& cfg) {
  const int k = a.best_index;
  if (k < 0 || !b.defined[k]) return false;
  const double va = a.variance[k], vb = b.variance[k];
  return vb >= cfg.min_half_variance && vb > cfg.variance_ratio * std::max(va, kMinVarianceFloor);
}

} // namespace

Array2D<std::uint8_t> predict_occlusion(const LightField4D& lf, const SlopeField& field, const OcclusionConfig& cfg) {
  const Image center = lf.central_view();
  const Array2D<std::uint8_t> near_edges = dilate(canny(to_gray(center), cfg.canny), cfg.edge_dilation);
  const int H = lf.height(), W = lf.width();
  Array2D<std::uint8_t> mask(H, W, 0);
  const std::vector<double> candidates = make_candidates(cfg.sepi.d_min, cfg.sepi.d_max, cfg.sepi.candidate_count);
  const ViewRange halves[4] = {unoccluded_views(lf, Occlusion::Left), unoccluded_views(lf, Occlusion::Right),
                               unoccluded_views(lf, Occlusion::Up), unoccluded_views(lf, Occlusion::Down)};
  auto disagrees = [&](int x, int y) {
    if (!field.disparity.valid(y, x)) return false;
    CostCurve c[4];
    for (int h = 0; h < 4; ++h) c[h] = initial_slope(lf, x, y, candidates, halves[h], cfg.sepi.options).curve;
    return half_disagrees(c[0], c[1], cfg) || half_disagrees(c[1], c[0], cfg) || half_disagrees(c[2], c[3], cfg) ||
           half_disagrees(c[3], c[2], cfg);
  };
  parallel_for(H, [&](int y) {
    for (int x = 0; x < W; ++x)
      if (near_edges(y, x) && disagrees(x, y)) mask(y, x) = 1;
  }, cfg.sepi.workers);

  // A background pixel is hidden in views up to |d_near - d_far| * (n - 1) / 2
  // px from the edge, beyond the reach of the edge dilation.
  const int reach = cfg.grow_limit >= 0
                        ? cfg.grow_limit
                        : static_cast<int>(std::ceil((cfg.sepi.d_max - cfg.sepi.d_min) *
                                                     (std::max(lf.n_s(), lf.n_t()) - 1) / 2.0));
  Array2D<int> depth(H, W, -1);
  std::vector<int> frontier;
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x)
      if (mask(y, x)) depth(y, x) = 0, frontier.push_back(y * W + x);
  constexpr int dx[4] = {-1, 1, 0, 0}, dy[4] = {0, 0, -1, 1};
  for (int step = 1; step <= reach && !frontier.empty(); ++step) {
    std::vector<int> ring;
    for (int idx : frontier) {
      for (int k = 0; k < 4; ++k) {
        const int nx = idx % W + dx[k], ny = idx / W + dy[k];
        if (nx < 0 || nx >= W || ny < 0 || ny >= H || depth(ny, nx) >= 0) continue;
        depth(ny, nx) = step;
        ring.push_back(ny * W + nx);
      }
    }
    std::sort(ring.begin(), ring.end());
    std::vector<std::uint8_t> hit(ring.size(), 0);
    parallel_for(static_cast<int>(ring.size()), [&](int i) { hit[i] = disagrees(ring[i] % W, ring[i] / W); },
                 cfg.sepi.workers);
    frontier.clear();
    for (std::size_t i = 0; i < ring.size(); ++i) {
      if (!hit[i]) continue;
      mask(ring[i] / W, ring[i] % W) = 1;
      frontier.push_back(ring[i]);
    }
  }
  return mask;
}

NeighbourhoodMeans neighbourhood_means(const Array2D<double>& disparity, int x0, int y0, const OcclusionConfig& cfg) {
  NeighbourhoodMeans m;
  const int r = cfg.window_radius;
  m.p = window_mean(disparity, x0, y0, r);
  m.left = window_mean(disparity, x0 - cfg.offset, y0, r);
  m.right = window_mean(disparity, x0 + cfg.offset, y0, r);
  m.up = window_mean(disparity, x0, y0 - cfg.offset, r);
  m.down = window_mean(disparity, x0, y0 + cfg.offset, r);
  return m;
}

Occlusion categorize(const NeighbourhoodMeans& m) {
  auto horizontal = [&] {
    if (m.p > m.right && m.left > m.right) return Occlusion::Left;
    if (m.p > m.left && m.right > m.left) return Occlusion::Right;
    return Occlusion::None;
  };
  auto longitudinal = [&] {
    if (m.p > m.down && m.up > m.down) return Occlusion::Up;
    if (m.p > m.up && m.down > m.up) return Occlusion::Down;
    return Occlusion::None;
  };
  // The axis crossing the depth edge has the larger probe contrast; inside an
  // occluded band the other axis only sees estimation noise.
  const bool vertical_first = std::abs(m.up - m.down) > std::abs(m.left - m.right);
  const Occlusion first = vertical_first ? longitudinal() : horizontal();
  if (first != Occlusion::None) return first;
  return vertical_first ? horizontal() : longitudinal();
}

Occlusion categorize(const Array2D<double>& disparity, int x0, int y0, const OcclusionConfig& cfg) {
  return categorize(neighbourhood_means(disparity, x0, y0, cfg));
}

ViewRange unoccluded_views(const LightField4D& lf, Occlusion category) {
  ViewRange v = ViewRange::full(lf);
  // A nearer occluder on the left drifts right (+x) relative to the background
  // as s grows, so the background stays visible for s <= s0.
  switch (category) {
  case Occlusion::Left: v.s_end = lf.center_s(); break;
  case Occlusion::Right: v.s_begin = lf.center_s(); break;
  case Occlusion::Up: v.t_end = lf.center_t(); break;
  case Occlusion::Down: v.t_begin = lf.center_t(); break;
  case Occlusion::None: break;
  }
  return v;
}

double discarded_view_fraction(int n_t, int n_s, Occlusion category) {
  const int total = n_t * n_s;
  switch (category) {
  case Occlusion::Left:
  case Occlusion::Right: return static_cast<double>(total - n_t * (n_s / 2 + 1)) / total;
  case Occlusion::Up:
  case Occlusion::Down: return static_cast<double>(total - n_s * (n_t / 2 + 1)) / total;
  case Occlusion::None: break;
  }
  return 0.0;
}

HalfSepiResult half_sepi_slope(const LightField4D& lf, const LightField4D& transposed, int x0, int y0,
                               Occlusion category, const std::vector<double>& candidates, const SepiOptions& opt) {
  HalfSepiResult out;
  if (category == Occlusion::None) return out;
  const bool longitudinal = category == Occlusion::Up || category == Occlusion::Down;
  const LightField4D& src = longitudinal ? transposed : lf;
  // Up/Down in the original field are Left/Right of the transposed one.
  const Occlusion side = category == Occlusion::Up ? Occlusion::Left
                         : category == Occlusion::Down ? Occlusion::Right
                                                       : category;
  const ViewRange views = unoccluded_views(src, side);
  out.rows = views.count();
  if (out.rows < 2) return out;
  const int px = longitudinal ? y0 : x0;
  const int py = longitudinal ? x0 : y0;
  out.estimate = initial_slope(src, px, py, candidates, views, opt).estimate;
  out.used = out.estimate.valid;
  return out;
}

SlopeField refine_occluded(const LightField4D& lf, const SlopeField& field, const OcclusionConfig& cfg,
                           OcclusionInfo* info) {
  const Array2D<std::uint8_t> mask = predict_occlusion(lf, field, cfg);
  const std::vector<double> candidates = make_candidates(cfg.sepi.d_min, cfg.sepi.d_max, cfg.sepi.candidate_count);
  const LightField4D transposed = transpose_lf(lf);

  SlopeField out = field;
  const int H = lf.height(), W = lf.width();
  if (info) {
    info->predictor = mask;
    info->category = Array2D<Occlusion>(H, W, Occlusion::None);
    info->mean_p = info->mean_left = info->mean_right = info->mean_up = info->mean_down = Array2D<double>(H, W, 0.0);
  }
  parallel_for(H, [&](int y) {
    for (int x = 0; x < W; ++x) {
      if (!mask(y, x)) continue;
      const NeighbourhoodMeans m = neighbourhood_means(field.disparity.values, x, y, cfg);
      const Occlusion category = categorize(m);
      if (info) {
        info->category(y, x) = category;
        info->mean_p(y, x) = m.p;
        info->mean_left(y, x) = m.left;
        info->mean_right(y, x) = m.right;
        info->mean_up(y, x) = m.up;
        info->mean_down(y, x) = m.down;
      }
      if (category == Occlusion::None) continue;
      const HalfSepiResult r = half_sepi_slope(lf, transposed, x, y, category, candidates, cfg.sepi.options);
      if (!r.used) continue;
      out.disparity.values(y, x) = r.estimate.disparity;
      out.disparity.valid(y, x) = 1;
      out.confidence(y, x) = r.estimate.confidence;
      out.sharpness(y, x) = r.estimate.sharpness;
      out.occlusion(y, x) = category;
    }
  }, cfg.sepi.workers);
  return out;
}

} // namespace lfd
