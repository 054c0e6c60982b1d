#pragma once

#include <optional>
#include <vector>

#include "lfd/sepi.hpp"

namespace lfd {

struct JointConfig {
  std::vector<int> offsets = {-2, -1, 0, 1, 2};   // neighbour lines, non-occluded pixels
  std::vector<int> occluded_offsets = {0, 1, 2};   // mirrored toward the non-occluded side
  int delta_count = 11;        // delta grid size
  double delta_span = 2.0;     // delta grid half-width in coarse candidate steps
  double window_steps = 1.0;   // refinement half-width in coarse candidate steps
  int window_count = 9;        // sub-steps across the window
  SepiConfig sepi;             // coarse candidate set, sampling options, workers
};

/// d_i = d0 + i*delta. Disparity is the reciprocal slope, so this is the
/// slope relation 1/k_i = 1/k0 + i*delta. nullopt when the slope degenerates.
double neighbor_disparity(double d0, int i, double delta);
std::optional<double> neighbor_slope(double k0, int i, double delta);

/// exp(-|i| / max|i|) over the offset set; 1 for a lone zero offset.
double spatial_weight(int i, const std::vector<int>& offsets);

/// Lines taking part in one pixel's joint cost. Offsets are along +x of `lf`;
/// longitudinal occlusions pass the transposed field with swapped coordinates.
struct JointSetup {
  const LightField4D* lf = nullptr;
  int x0 = 0, y0 = 0;
  std::vector<int> offsets;
  ViewRange views;
  SepiOptions options;
};

/// Neighbourhood and views for a pixel given its occlusion category.
/// `transposed` must be transpose_lf(lf); it is only used for Up/Down.
JointSetup make_joint_setup(const LightField4D& lf, const LightField4D& transposed, int x0, int y0,
                            Occlusion category, const JointConfig& cfg);

struct JointCost {
  double value = 0.0;   // eta * sum_i c * w_s(i) * V_i
  double eta = 0.0;     // N / (n * views)
  int samples = 0;      // N
  bool defined = false;
};

/// Joint photo-consistency of the line family through (x0 + i, y0) with
/// disparities d0 + i*delta. Each line is compared against the central colour
/// at its own anchor; neighbours falling off the image contribute nothing.
JointCost joint_cost(const JointSetup& setup, double d0, double delta, double confidence);

/// Grid for delta: `count` values over +-span*step, always containing 0.
std::vector<double> delta_grid(double coarse_step, const JointConfig& cfg);

/// Argmin over `deltas` of the summed per-line variances; ties toward 0.
/// Returns 0 when no line is defined for any delta.
double estimate_delta(const JointSetup& setup, double d0, const std::vector<double>& deltas);

struct RefinedSlope {
  double disparity = 0.0;
  double delta = 0.0;
  double eta = 0.0;
  double cost = 0.0;
  double confidence = 0.0;
  bool changed = false; // false when every window candidate was undefined
};

/// Searches the window around d0 (delta re-estimated per candidate) and
/// re-evaluates the confidence over the coarse candidates at the chosen delta.
RefinedSlope refine_slope(const JointSetup& setup, double d0, double confidence, const JointConfig& cfg);

struct JointDiagnostics {
  Array2D<double> d0, delta, refined, eta, cost;
};

/// refine_slope for every valid pixel, using the occlusion category carried by
/// the field. Invalid pixels are copied unchanged.
SlopeField refine_field(const LightField4D& lf, const SlopeField& field, const JointConfig& cfg,
                        JointDiagnostics* diagnostics = nullptr);

} // namespace lfd
