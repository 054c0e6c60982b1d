#pragma once

#include <cstdint>
#include <vector>

#include "lfd/image_ops.hpp"
#include "lfd/sepi.hpp"

namespace lfd {

struct OcclusionConfig {
  int offset = 4;                 // distance of the left/right (up/down) probes
  int window_radius = 1;          // 3x3 neighbourhood means
  int edge_dilation = 2;          // predictor: dilation of central-view Canny edges
  double variance_ratio = 2.0;    // predictor: other-half / own-half variance
  double min_half_variance = 5e-3; // predictor: the disagreeing half must exceed this
  int grow_limit = -1;            // predictor: max growth from the edge seeds, px (-1: widest occlusion band)
  CannyParams canny;
  SepiConfig sepi;                // candidate set and sampling shared with the initial stage
};

/// Per-pixel predictor mask, category and the neighbourhood mean disparities
/// the categorization compared (horizontal probes; longitudinal in up/down).
struct OcclusionInfo {
  Array2D<std::uint8_t> predictor;
  Array2D<Occlusion> category;
  Array2D<double> mean_p, mean_left, mean_right, mean_up, mean_down;
};

/// Pixels whose angular patch splits (left/right or up/down of the central
/// view) into one half that is consistent at its best disparity and another
/// half that is not consistent there. Seeds lie near central-view edges; the
/// mask then grows through 4-connected pixels passing the same test, up to
/// `grow_limit` px, so it can span the whole occlusion band.
Array2D<std::uint8_t> predict_occlusion(const LightField4D& lf, const SlopeField& field, const OcclusionConfig& cfg);

struct NeighbourhoodMeans {
  double p = 0.0, left = 0.0, right = 0.0, up = 0.0, down = 0.0;
};

NeighbourhoodMeans neighbourhood_means(const Array2D<double>& disparity, int x0, int y0, const OcclusionConfig& cfg);

/// Occluder side from mean disparities around p and its +-offset probes.
/// Depth decreases with disparity, so "D_p < D_R and D_L < D_R" reads
/// d_p > d_R and d_L > d_R. The axis whose probes differ more is tested
/// first; horizontal goes first on ties.
Occlusion categorize(const Array2D<double>& disparity, int x0, int y0, const OcclusionConfig& cfg);
Occlusion categorize(const NeighbourhoodMeans& m);

/// Views that see past an occluder on the given side, in the original field's
/// angular coordinates. The central view row/column is included.
ViewRange unoccluded_views(const LightField4D& lf, Occlusion category);

/// Share of views a half-SEPI drops for this category (0 for None).
double discarded_view_fraction(int n_t, int n_s, Occlusion category);

struct HalfSepiResult {
  SlopeEstimate estimate;
  int rows = 0;       // stitched rows (views) taking part
  bool used = false;  // false: too few views, caller keeps its estimate
};

/// Half-SEPI re-estimation. Left/Right restrict the horizontal stitching to one
/// side of s0; Up/Down run the same machinery on the transposed field.
HalfSepiResult half_sepi_slope(const LightField4D& lf, const LightField4D& transposed, int x0, int y0,
                               Occlusion category, const std::vector<double>& candidates,
                               const SepiOptions& opt = {});

/// predict -> categorize -> half_sepi on masked pixels. Unmasked pixels are
/// copied bitwise; the input field is never read after partial updates.
SlopeField refine_occluded(const LightField4D& lf, const SlopeField& field, const OcclusionConfig& cfg,
                           OcclusionInfo* info = nullptr);

} // namespace lfd
