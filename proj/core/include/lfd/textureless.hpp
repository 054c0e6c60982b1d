#pragma once

#include <cstdint>
#include <vector>

#include "lfd/image_ops.hpp"
#include "lfd/slope_field.hpp"
#include "lfd/superpixel.hpp"

namespace lfd {

struct TexturelessConfig {
  SlicParams slic{0, 10.0, 10};     // size 0: default_superpixel_size
  CannyParams canny;
  double sharpness_threshold = 2.0; // texture point when the cost minimum is this sharp
  double lti_threshold = 0.05;
  int lti_margin = 3;               // texture points this close to the contour are not interior
  double support_confidence = 1.5;  // textured support pixels need at least this confidence
  double support_weight_cap = 100.0;
  int support_ring = 2;             // support band outside the superpixel, px
  double meanshift_bandwidth = 0.08;
  double tau_out = 1.0;
  bool pairwise = false;            // couple neighbouring variables instead of anchoring to d_l
  double irls_tolerance = 1e-6;
  int irls_max_iterations = 100;
};

/// Canny edges of the central view OR a sharp cost minimum at a valid pixel.
Array2D<std::uint8_t> mark_texture_points(const SlopeField& field, const Image& central_view,
                                          const TexturelessConfig& cfg);

/// Sets lti (share of interior pixels that are texture points) and the
/// textureless flag. A pixel is interior when no other label lies within
/// Manhattan distance `margin`; margin 1 excludes exactly the boundary pixels.
/// Superpixels without interior pixels retry with a smaller margin.
void compute_lti(SuperpixelSeg& seg, const Array2D<std::uint8_t>& texture_points, double threshold, int margin = 1);

struct SupportPoint {
  double x = 0.0, y = 0.0, d = 0.0, w = 1.0;
};

struct PlaneFit {
  double a = 0.0, b = 0.0, c = 0.0; // d = a*x + b*y + c
  bool defined = false;             // false without any positive-weight support
  bool constant = false;            // weighted-mean fallback
  double operator()(double x, double y) const { return a * x + b * y + c; }
};

/// Weighted least-squares plane; weighted mean when fewer than 3 points or
/// the points are (numerically) collinear.
PlaneFit fit_linear_depth(const std::vector<SupportPoint>& support);

/// Gaussian-kernel mean shift in 1-D; modes closer than bandwidth/2 share a
/// cluster id. Ids are ordered by mode value.
std::vector<int> mean_shift_clusters(const std::vector<double>& values, double bandwidth);

/// Weighted L1 residual |x_i - x_j - target| (j < 0: |x_i - target|).
struct L1Term {
  int i = 0;
  int j = -1;
  double target = 0.0;
  double weight = 1.0;
};

double l1_energy(const std::vector<L1Term>& terms, const std::vector<double>& x);

struct L1Result {
  std::vector<double> x;
  std::vector<double> energy_history; // accepted iterates, non-increasing
  int iterations = 0;
  bool converged = false;
};

/// Iteratively reweighted least squares started from the least-squares
/// solution. An iterate that raises the L1 energy ends the solve, so the best
/// iterate is always the one returned. Every variable needs a single-variable
/// term for the normal equations to be definite.
L1Result solve_l1_irls(int n, const std::vector<L1Term>& terms, double tolerance, int max_iterations);

struct SuperpixelUpdate {
  int id = 0;
  int layer = -1;          // propagation order; 0 for textured superpixels
  int cluster = 0;
  int support = 0;         // support points used for the plane
  PlaneFit plane;
  double d_before = 0.0;   // mean of the incoming field
  double d_line = 0.0;     // mean of the plane over the superpixel
  double d_after = 0.0;
};

struct TexturelessResult {
  DisparityMap disparity;
  SuperpixelSeg seg;
  Array2D<std::uint8_t> texture_points;
  Array2D<std::uint8_t> textureless; // pixel mask of textureless superpixels
  std::vector<SuperpixelUpdate> updates;
  std::vector<double> energy_history;
  bool converged = true;
};

/// Edge-to-interior propagation into textureless superpixels. Pixels of
/// textured superpixels keep their input values bitwise.
TexturelessResult propagate_textureless(SuperpixelSeg seg, const Array2D<std::uint8_t>& texture_points,
                                        const SlopeField& field, const TexturelessConfig& cfg);

/// Segmentation and texture marking from the central view, then propagation.
TexturelessResult refine_textureless(const Image& central_view, const SlopeField& field,
                                     const TexturelessConfig& cfg);

} // namespace lfd
