#pragma once

#include <cstdint>
#include <vector>

#include "lfd/light_field.hpp"
#include "lfd/slope_field.hpp"

namespace lfd {

/// Inclusive angular window of views taking part in a stitched EPI.
struct ViewRange {
  int t_begin = 0, t_end = 0;
  int s_begin = 0, s_end = 0;

  static ViewRange full(const LightField4D& lf) { return {0, lf.n_t() - 1, 0, lf.n_s() - 1}; }
  /// Only the central view row, i.e. a single horizontal EPI.
  static ViewRange central_row(const LightField4D& lf) { return {lf.center_t(), lf.center_t(), 0, lf.n_s() - 1}; }

  int count() const { return (t_end - t_begin + 1) * (s_end - s_begin + 1); }
  bool contains(int t, int s) const { return t >= t_begin && t <= t_end && s >= s_begin && s <= s_end; }
};

/// Uniform grid of `count` disparities over [d_min, d_max].
std::vector<double> make_candidates(double d_min, double d_max, int count);

/// Row of view row t0+j holding the point seen at y0 in the central view.
inline double corresponding_row_y(double y0, int j, double disparity) { return y0 + j * disparity; }

/// One stitched row: view (t, s) at the corresponding y, blended between the
/// two neighbouring image rows, and the x-shift j*N_s*d applied to it.
struct SepiRow {
  int t = 0, s = 0, j = 0;
  double shift = 0.0;
  bool available = false;
  std::vector<double> data; // width * channels, empty when unavailable
};

/// Stitched EPI for the central pixel (x0, y0) and one candidate disparity.
/// Rows are ordered by j (view row), then by s.
struct Sepi {
  int x0 = 0, y0 = 0;
  double disparity = 0.0;
  int width = 0, channels = 0;
  int n_s = 0, center_t = 0, center_s = 0;
  std::vector<SepiRow> rows;

  /// Row coordinate of `row` on the stitched s-axis, relative to the central row.
  int relative_row(const SepiRow& row) const { return (row.t - center_t) * n_s + (row.s - center_s); }
  /// SEPI(x, row): the source row sampled at x - shift. False when outside.
  bool sample(const SepiRow& row, double x, double* out) const;
  /// Integer-x rendering (rows x width), unavailable/outside samples set to 0.
  Image render() const;
};

struct SepiOptions {
  bool nearest_row = false; // round the corresponding y instead of blending
};

Sepi build_sepi(const LightField4D& lf, int x0, int y0, double disparity, const ViewRange& views,
                const SepiOptions& opt = {});

/// Mean squared colour distance to `p` along the candidate line through the
/// central row; `samples == 0` marks an undefined variance.
struct LineCost {
  double variance = 0.0;
  int samples = 0;
  bool defined() const { return samples > 0; }
};

LineCost photo_variance(const Sepi& sepi, const double* p);

/// Same quantity as photo_variance(build_sepi(...)) without materializing the
/// stitched rows; results are bit-identical.
LineCost line_cost(const LightField4D& lf, int x0, int y0, double disparity, const ViewRange& views,
                   const double* p, const SepiOptions& opt = {});

struct CostCurve {
  std::vector<double> candidates;
  std::vector<double> variance;
  std::vector<std::uint8_t> defined;
  int best_index = -1;
};

struct SlopeEstimate {
  double disparity = 0.0;
  double confidence = 0.0;
  double sharpness = 0.0;
  bool valid = false;
};

/// Confidence-ratio guards: c = mean / max(min, kMinVarianceFloor), capped.
inline constexpr double kMinVarianceFloor = 1e-12;
inline constexpr double kConfidenceCap = 1e6;

/// Argmin (ties toward smaller |d|, then smaller d), mean/min confidence (1 for
/// a flat curve) and the sharpness: mean of the defined costs within
/// `sharpness_radius` candidates of the minimum over the minimum.
SlopeEstimate estimate_from_curve(CostCurve& curve, int sharpness_radius = 2);

/// Confidence ratio of an arbitrary cost list (undefined entries skipped).
double confidence_ratio(const std::vector<double>& costs, const std::vector<std::uint8_t>& defined);

struct InitialSlope {
  SlopeEstimate estimate;
  CostCurve curve;
};

InitialSlope initial_slope(const LightField4D& lf, int x0, int y0, const std::vector<double>& candidates,
                           const ViewRange& views, const SepiOptions& opt = {});

struct SepiConfig {
  double d_min = -2.5;
  double d_max = 2.5;
  int candidate_count = 75;
  bool single_epi = false;    // restrict to the central view row (ablation baseline)
  bool vertical_pass = false; // also estimate on the transposed field, keep the more confident
  SepiOptions options;
  int workers = 0;
};

/// Initial disparity and confidence for every central-view pixel.
SlopeField initial_depth_map(const LightField4D& lf, const SepiConfig& cfg);

} // namespace lfd
