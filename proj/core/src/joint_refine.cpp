#include "lfd/joint_refine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "lfd/error.hpp"
#include "lfd/occlusion.hpp"
#include "lfd/parallel.hpp"

namespace lfd {

namespace {

double coarse_step(const SepiConfig& s) { return (s.d_max - s.d_min) / (s.candidate_count - 1); }

bool in_image(const LightField4D& lf, int x, int y) {
  return x >= 0 && x < lf.width() && y >= 0 && y < lf.height();
}

LineCost anchored_line_cost(const JointSetup& setup, int i, double d) {
  const LightField4D& lf = *setup.lf;
  const int x = setup.x0 + i;
  if (!in_image(lf, x, setup.y0)) return {};
  const int t0 = lf.center_t(), s0 = lf.center_s();
  double p[4];
  for (int c = 0; c < lf.channels(); ++c) p[c] = lf.at(t0, s0, setup.y0, x, c);
  return line_cost(lf, x, setup.y0, d, setup.views, p, setup.options);
}

} // namespace

double neighbor_disparity(double d0, int i, double delta) { return d0 + i * delta; }

std::optional<double> neighbor_slope(double k0, int i, double delta) {
  if (k0 == 0.0) return std::nullopt;
  const double inv = 1.0 / k0 + i * delta;
  if (inv == 0.0 || !std::isfinite(inv)) return std::nullopt;
  return 1.0 / inv;
}

double spatial_weight(int i, const std::vector<int>& offsets) {
  int max_abs = 0;
  for (int o : offsets) max_abs = std::max(max_abs, std::abs(o));
  if (max_abs == 0) return 1.0;
  return std::exp(-static_cast<double>(std::abs(i)) / max_abs);
}

JointSetup make_joint_setup(const LightField4D& lf, const LightField4D& transposed, int x0, int y0,
                            Occlusion category, const JointConfig& cfg) {
  JointSetup s;
  s.options = cfg.sepi.options;
  if (category == Occlusion::None) {
    s.lf = &lf;
    s.x0 = x0;
    s.y0 = y0;
    s.offsets = cfg.offsets;
    s.views = cfg.sepi.single_epi ? ViewRange::central_row(lf) : ViewRange::full(lf);
    return s;
  }
  const bool longitudinal = category == Occlusion::Up || category == Occlusion::Down;
  // Lines step away from the occluder: +x for Left, -x for Right; Up/Down are
  // Left/Right of the transposed field.
  const bool toward_positive = category == Occlusion::Left || category == Occlusion::Up;
  s.lf = longitudinal ? &transposed : &lf;
  s.x0 = longitudinal ? y0 : x0;
  s.y0 = longitudinal ? x0 : y0;
  for (int o : cfg.occluded_offsets) s.offsets.push_back(toward_positive ? std::abs(o) : -std::abs(o));
  s.views = unoccluded_views(*s.lf, toward_positive ? Occlusion::Left : Occlusion::Right);
  return s;
}

JointCost joint_cost(const JointSetup& setup, double d0, double delta, double confidence) {
  JointCost out;
  double acc = 0.0;
  for (int i : setup.offsets) {
    const LineCost lc = anchored_line_cost(setup, i, neighbor_disparity(d0, i, delta));
    if (!lc.defined()) continue;
    acc += confidence * spatial_weight(i, setup.offsets) * lc.variance;
    out.samples += lc.samples;
    out.defined = true;
  }
  const double possible = static_cast<double>(setup.offsets.size()) * setup.views.count();
  out.eta = possible > 0 ? out.samples / possible : 0.0;
  out.value = out.eta * acc;
  return out;
}

std::vector<double> delta_grid(double step, const JointConfig& cfg) {
  const int n = std::max(1, cfg.delta_count);
  std::vector<double> out;
  out.reserve(n + 1);
  const double half = cfg.delta_span * step;
  if (n == 1) return {0.0};
  bool has_zero = false;
  for (int i = 0; i < n; ++i) {
    // Symmetric construction so the middle entry is exactly 0 for odd n.
    const double v = (2 * i - (n - 1)) * half / (n - 1);
    has_zero = has_zero || v == 0.0;
    out.push_back(v);
  }
  if (!has_zero) {
    out.push_back(0.0);
    std::sort(out.begin(), out.end());
  }
  return out;
}

double estimate_delta(const JointSetup& setup, double d0, const std::vector<double>& deltas) {
  double best = 0.0, best_cost = std::numeric_limits<double>::infinity();
  bool any = false;
  for (double delta : deltas) {
    double cost = 0.0;
    bool defined = false;
    for (int i : setup.offsets) {
      if (i == 0) continue; // independent of delta
      const LineCost lc = anchored_line_cost(setup, i, neighbor_disparity(d0, i, delta));
      if (!lc.defined()) continue;
      cost += lc.variance;
      defined = true;
    }
    if (!defined) continue;
    if (!any || cost < best_cost || (cost == best_cost && std::abs(delta) < std::abs(best))) {
      best = delta;
      best_cost = cost;
      any = true;
    }
  }
  return any ? best : 0.0;
}

RefinedSlope refine_slope(const JointSetup& setup, double d0, double confidence, const JointConfig& cfg) {
  RefinedSlope out;
  out.disparity = d0;
  out.confidence = confidence;
  const double step = coarse_step(cfg.sepi);
  const std::vector<double> deltas = delta_grid(step, cfg);
  const int m = std::max(1, cfg.window_count);
  const double half = cfg.window_steps * step;

  double best_cost = std::numeric_limits<double>::infinity();
  double best_offset = 0.0;
  for (int k = 0; k < m; ++k) {
    const double offset = m == 1 ? 0.0 : (2 * k - (m - 1)) * half / (m - 1);
    const double d = d0 + offset;
    const double delta = estimate_delta(setup, d, deltas);
    // c is constant over the window; selection runs on the unscaled cost so a
    // zero confidence cannot flatten the curve.
    const JointCost jc = joint_cost(setup, d, delta, 1.0);
    if (!jc.defined) continue;
    if (!out.changed || jc.value < best_cost ||
        (jc.value == best_cost && std::abs(offset) < std::abs(best_offset))) {
      best_cost = jc.value;
      best_offset = offset;
      out.disparity = d;
      out.delta = delta;
      out.eta = jc.eta;
      out.cost = jc.value * confidence;
      out.changed = true;
    }
  }
  if (!out.changed) return out;

  // Confidence: joint cost over the coarse candidate set at the chosen delta,
  // mean over min, with the window minimum included. c is left out since it
  // cancels in the ratio.
  const std::vector<double> coarse = make_candidates(cfg.sepi.d_min, cfg.sepi.d_max, cfg.sepi.candidate_count);
  const JointCost at_best = joint_cost(setup, out.disparity, out.delta, 1.0);
  double sum = 0.0, min_v = at_best.value;
  int count = 0;
  for (double d : coarse) {
    const JointCost jc = joint_cost(setup, d, out.delta, 1.0);
    if (!jc.defined) continue;
    sum += jc.value;
    min_v = std::min(min_v, jc.value);
    ++count;
  }
  if (count > 0) {
    const double mean = sum / count;
    out.confidence = mean <= min_v ? 1.0 : std::min(mean / std::max(min_v, kMinVarianceFloor), kConfidenceCap);
  }
  return out;
}

SlopeField refine_field(const LightField4D& lf, const SlopeField& field, const JointConfig& cfg,
                        JointDiagnostics* diagnostics) {
  if (field.height() != lf.height() || field.width() != lf.width())
    fail(Errc::DimensionMismatch, "slope field does not match the light field");
  if (cfg.window_count < 1 || cfg.window_steps < 0.0 || cfg.delta_count < 1)
    fail(Errc::BadConfig, "joint refinement window and delta grid must be positive");
  const LightField4D transposed = transpose_lf(lf);
  SlopeField out = field;
  const int H = lf.height(), W = lf.width();
  if (diagnostics) {
    diagnostics->d0 = field.disparity.values;
    diagnostics->refined = field.disparity.values;
    diagnostics->delta = diagnostics->eta = diagnostics->cost = Array2D<double>(H, W, 0.0);
  }
  parallel_for(H, [&](int y) {
    for (int x = 0; x < W; ++x) {
      if (!field.disparity.valid(y, x)) continue;
      const JointSetup setup = make_joint_setup(lf, transposed, x, y, field.occlusion(y, x), cfg);
      const RefinedSlope r = refine_slope(setup, field.disparity.values(y, x), field.confidence(y, x), cfg);
      if (!r.changed) continue;
      out.disparity.values(y, x) = r.disparity;
      out.confidence(y, x) = r.confidence;
      if (diagnostics) {
        diagnostics->refined(y, x) = r.disparity;
        diagnostics->delta(y, x) = r.delta;
        diagnostics->eta(y, x) = r.eta;
        diagnostics->cost(y, x) = r.cost;
      }
    }
  }, cfg.sepi.workers);
  return out;
}

} // namespace lfd
