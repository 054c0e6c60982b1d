#include "lfd/sepi.hpp"

#include <algorithm>
#include <cmath>

#include "lfd/error.hpp"
#include "lfd/parallel.hpp"

namespace lfd {

const char* to_string(Occlusion o) {
  switch (o) {
  case Occlusion::None: return "none";
  case Occlusion::Left: return "left";
  case Occlusion::Right: return "right";
  case Occlusion::Up: return "up";
  case Occlusion::Down: return "down";
  }
  return "?";
}

namespace {

// Source of one stitched row: image row a, optionally blended with the next row b.
struct RowSource {
  const float* a = nullptr;
  const float* b = nullptr;
  double fy = 0.0;

  double at(int xi, int c, int channels) const {
    const std::size_t i = static_cast<std::size_t>(xi) * channels + c;
    return b ? (1.0 - fy) * a[i] + fy * b[i] : static_cast<double>(a[i]);
  }
};

bool locate_row(const LightField4D& lf, int t, int s, double y, const SepiOptions& opt, RowSource& out) {
  if (!(y >= 0.0) || y > static_cast<double>(lf.height() - 1)) return false;
  if (opt.nearest_row) {
    out = RowSource{lf.row_ptr(t, s, static_cast<int>(std::lround(y))), nullptr, 0.0};
    return true;
  }
  const int y0 = static_cast<int>(y);
  const double fy = y - y0;
  out = fy == 0.0 ? RowSource{lf.row_ptr(t, s, y0), nullptr, 0.0}
                  : RowSource{lf.row_ptr(t, s, y0), lf.row_ptr(t, s, y0 + 1), fy};
  return true;
}

inline double stitch_shift(int j, int n_s, double disparity) { return (j * n_s) * disparity; }

// Position inside the shifted source row of the candidate line sample on stitched row r.
inline double source_x(int x0, int r, double disparity, double shift) { return (x0 + r * disparity) - shift; }

template <typename ValueAt>
bool interpolate(ValueAt&& value_at, int width, int channels, double x, double* out) {
  // The stitched coordinate carries rounding from r*d - j*n_s*d; a sample
  // that is geometrically on the last or first pixel must not be dropped.
  constexpr double kEdgeSlack = 1e-9;
  const double last = static_cast<double>(width - 1);
  if (x > last && x <= last + kEdgeSlack) x = last;
  if (x < 0.0 && x >= -kEdgeSlack) x = 0.0;
  if (!(x >= 0.0) || x > last) return false;
  const int xi = static_cast<int>(x);
  const double f = x - xi;
  if (f == 0.0) {
    for (int c = 0; c < channels; ++c) out[c] = value_at(xi, c);
    return true;
  }
  for (int c = 0; c < channels; ++c) out[c] = (1.0 - f) * value_at(xi, c) + f * value_at(xi + 1, c);
  return true;
}

inline double squared_distance(const double* v, const double* p, int channels) {
  double acc = 0.0;
  for (int c = 0; c < channels; ++c) {
    const double diff = v[c] - p[c];
    acc += diff * diff;
  }
  return acc;
}

} // namespace

std::vector<double> make_candidates(double d_min, double d_max, int count) {
  if (count < 2 || !(d_min < d_max)) fail(Errc::BadConfig, "need at least 2 candidates over a non-empty range");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double step = (d_max - d_min) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = d_min + i * step;
  out.back() = d_max;
  return out;
}

bool Sepi::sample(const SepiRow& row, double x, double* out) const {
  if (!row.available) return false;
  const double* data = row.data.data();
  const int C = channels;
  return interpolate([&](int xi, int c) { return data[static_cast<std::size_t>(xi) * C + c]; }, width, C,
                     x - row.shift, out);
}

Image Sepi::render() const {
  Image img(static_cast<int>(rows.size()), width, channels, 0.0f);
  double v[4];
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int x = 0; x < width; ++x) {
      if (!sample(rows[r], x, v)) continue;
      for (int c = 0; c < channels; ++c) img.at(static_cast<int>(r), x, c) = static_cast<float>(v[c]);
    }
  }
  return img;
}

Sepi build_sepi(const LightField4D& lf, int x0, int y0, double disparity, const ViewRange& views,
                const SepiOptions& opt) {
  Sepi sepi;
  sepi.x0 = x0;
  sepi.y0 = y0;
  sepi.disparity = disparity;
  sepi.width = lf.width();
  sepi.channels = lf.channels();
  sepi.n_s = lf.n_s();
  sepi.center_t = lf.center_t();
  sepi.center_s = lf.center_s();
  const int C = lf.channels();
  for (int t = views.t_begin; t <= views.t_end; ++t) {
    const int j = t - lf.center_t();
    const double y = corresponding_row_y(y0, j, disparity);
    for (int s = views.s_begin; s <= views.s_end; ++s) {
      SepiRow row;
      row.t = t;
      row.s = s;
      row.j = j;
      row.shift = stitch_shift(j, lf.n_s(), disparity);
      RowSource src;
      row.available = locate_row(lf, t, s, y, opt, src);
      if (row.available) {
        row.data.resize(static_cast<std::size_t>(lf.width()) * C);
        for (int x = 0; x < lf.width(); ++x) {
          for (int c = 0; c < C; ++c) row.data[static_cast<std::size_t>(x) * C + c] = src.at(x, c, C);
        }
      }
      sepi.rows.push_back(std::move(row));
    }
  }
  return sepi;
}

LineCost photo_variance(const Sepi& sepi, const double* p) {
  LineCost cost;
  double sum = 0.0;
  double v[4];
  for (const SepiRow& row : sepi.rows) {
    if (!row.available) continue;
    const double x = source_x(sepi.x0, sepi.relative_row(row), sepi.disparity, 0.0);
    if (!sepi.sample(row, x, v)) continue;
    sum += squared_distance(v, p, sepi.channels);
    ++cost.samples;
  }
  if (cost.samples > 0) cost.variance = sum / cost.samples;
  return cost;
}

LineCost line_cost(const LightField4D& lf, int x0, int y0, double disparity, const ViewRange& views, const double* p,
                   const SepiOptions& opt) {
  LineCost cost;
  double sum = 0.0;
  double v[4];
  const int C = lf.channels();
  const int W = lf.width();
  for (int t = views.t_begin; t <= views.t_end; ++t) {
    const int j = t - lf.center_t();
    const double y = corresponding_row_y(y0, j, disparity);
    const double shift = stitch_shift(j, lf.n_s(), disparity);
    for (int s = views.s_begin; s <= views.s_end; ++s) {
      RowSource src;
      if (!locate_row(lf, t, s, y, opt, src)) continue;
      const int r = j * lf.n_s() + (s - lf.center_s());
      // Same expression as Sepi::sample(source_x(...)) so both routes agree bitwise.
      const double x = source_x(x0, r, disparity, 0.0) - shift;
      if (!interpolate([&](int xi, int c) { return src.at(xi, c, C); }, W, C, x, v)) continue;
      sum += squared_distance(v, p, C);
      ++cost.samples;
    }
  }
  if (cost.samples > 0) cost.variance = sum / cost.samples;
  return cost;
}

double confidence_ratio(const std::vector<double>& costs, const std::vector<std::uint8_t>& defined) {
  double min_v = 0.0, sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (!defined[i]) continue;
    min_v = count == 0 ? costs[i] : std::min(min_v, costs[i]);
    sum += costs[i];
    ++count;
  }
  if (count == 0) return 0.0;
  const double mean = sum / count;
  if (mean <= min_v) return 1.0;
  return std::min(mean / std::max(min_v, kMinVarianceFloor), kConfidenceCap);
}

SlopeEstimate estimate_from_curve(CostCurve& curve, int sharpness_radius) {
  SlopeEstimate est;
  curve.best_index = -1;
  const int n = static_cast<int>(curve.variance.size());
  for (int i = 0; i < n; ++i) {
    if (!curve.defined[i]) continue;
    if (curve.best_index < 0) {
      curve.best_index = i;
      continue;
    }
    const double v = curve.variance[i];
    const double best = curve.variance[curve.best_index];
    if (v < best) {
      curve.best_index = i;
    } else if (v == best) {
      const double d = curve.candidates[i];
      const double bd = curve.candidates[curve.best_index];
      if (std::abs(d) < std::abs(bd) || (std::abs(d) == std::abs(bd) && d < bd)) curve.best_index = i;
    }
  }
  if (curve.best_index < 0) return est;

  const double min_v = curve.variance[curve.best_index];
  est.valid = true;
  est.disparity = curve.candidates[curve.best_index];
  est.confidence = confidence_ratio(curve.variance, curve.defined);

  double local = 0.0;
  int local_count = 0;
  for (int i = std::max(0, curve.best_index - sharpness_radius);
       i <= std::min(n - 1, curve.best_index + sharpness_radius); ++i) {
    if (i == curve.best_index || !curve.defined[i]) continue;
    local += curve.variance[i];
    ++local_count;
  }
  const double local_mean = local_count > 0 ? local / local_count : min_v;
  est.sharpness = local_mean <= min_v ? 1.0 : std::min(local_mean / std::max(min_v, kMinVarianceFloor), kConfidenceCap);
  return est;
}

InitialSlope initial_slope(const LightField4D& lf, int x0, int y0, const std::vector<double>& candidates,
                           const ViewRange& views, const SepiOptions& opt) {
  if (candidates.empty()) fail(Errc::PreconditionViolated, "empty candidate set");
  InitialSlope out;
  double p[4];
  const float* center = lf.row_ptr(lf.center_t(), lf.center_s(), y0) + static_cast<std::size_t>(x0) * lf.channels();
  for (int c = 0; c < lf.channels(); ++c) p[c] = center[c];

  CostCurve& curve = out.curve;
  curve.candidates = candidates;
  curve.variance.assign(candidates.size(), 0.0);
  curve.defined.assign(candidates.size(), 0);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const LineCost cost = line_cost(lf, x0, y0, candidates[i], views, p, opt);
    curve.variance[i] = cost.variance;
    curve.defined[i] = cost.defined() ? 1 : 0;
  }
  out.estimate = estimate_from_curve(curve);
  return out;
}

namespace {

void write_estimate(SlopeField& field, int y, int x, const SlopeEstimate& est) {
  field.disparity.values(y, x) = est.valid ? est.disparity : 0.0;
  field.disparity.valid(y, x) = est.valid ? 1 : 0;
  field.confidence(y, x) = est.valid ? est.confidence : 0.0;
  field.sharpness(y, x) = est.valid ? est.sharpness : 0.0;
}

} // namespace

SlopeField initial_depth_map(const LightField4D& lf, const SepiConfig& cfg) {
  const std::vector<double> candidates = make_candidates(cfg.d_min, cfg.d_max, cfg.candidate_count);
  const ViewRange views = cfg.single_epi ? ViewRange::central_row(lf) : ViewRange::full(lf);
  SlopeField field(lf.height(), lf.width());
  parallel_for(lf.height(), [&](int y) {
    for (int x = 0; x < lf.width(); ++x) {
      write_estimate(field, y, x, initial_slope(lf, x, y, candidates, views, cfg.options).estimate);
    }
  }, cfg.workers);

  if (cfg.vertical_pass) {
    const LightField4D tlf = transpose_lf(lf);
    const ViewRange tviews = cfg.single_epi ? ViewRange::central_row(tlf) : ViewRange::full(tlf);
    parallel_for(lf.height(), [&](int y) {
      for (int x = 0; x < lf.width(); ++x) {
        const SlopeEstimate est = initial_slope(tlf, y, x, candidates, tviews, cfg.options).estimate;
        if (est.valid && est.confidence > field.confidence(y, x)) write_estimate(field, y, x, est);
      }
    }, cfg.workers);
  }
  return field;
}

} // namespace lfd
