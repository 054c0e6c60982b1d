#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lfd/kv_config.hpp"
#include "lfd/light_field.hpp"

namespace lfd {

enum class TextureKind { Noise, Checker, Flat, Sine };

TextureKind parse_texture_kind(const std::string& name);

/// Slanted planar patch, parameterized in central-view pixel coordinates:
/// d(u, v) = d0 + gx (u - cx) + gy (v - cy), covering u in [x_min, x_max),
/// v in [y_min, y_max). The patch's texture moves with the surface.
struct PlaneSpec {
  double d0 = 0.0, gx = 0.0, gy = 0.0;
  double x_min = -1e9, x_max = 1e9, y_min = -1e9, y_max = 1e9;
  TextureKind texture = TextureKind::Noise;
  std::array<double, 3> color{0.5, 0.5, 0.5};
  double contrast = 0.6;
  double scale = 3.0; // texture feature size in pixels
};

struct SceneSpec {
  int n_t = 9, n_s = 9;
  int height = 64, width = 64, channels = 3;
  std::uint64_t seed = 1;
  double noise_sigma = 0.0; // additive Gaussian sensor noise
  std::array<double, 3> background{0.0, 0.0, 0.0};
  std::vector<PlaneSpec> planes;

  /// Root keys: n_t n_s height width channels seed noise_sigma background;
  /// one [plane] block per patch with d0 gx gy x_min x_max y_min y_max
  /// texture (noise|checker|flat|sine) color contrast scale.
  static SceneSpec from_kv(const KvDocument& doc);
  static SceneSpec load(const std::filesystem::path& path);
};

struct SyntheticScene {
  LightField4D lf;
  Array2D<double> ground_truth;
  Array2D<int> plane_id;                 // -1 where only the background is seen
  Array2D<std::uint8_t> occlusion_band;  // central pixels hidden in at least one view
  Array2D<std::uint8_t> textureless;     // central pixels on flat-textured planes
};

/// Renders every view by intersecting pixel rays with the planes (the nearest,
/// i.e. largest disparity, wins). Deterministic for a fixed seed.
SyntheticScene generate_synthetic(const SceneSpec& spec);

/// Central pixels whose surface point is hidden by a nearer plane in view (t, s).
Array2D<std::uint8_t> occluded_in_view(const SceneSpec& spec, int t, int s);

/// Writes the views, lightfield.cfg, gt_disp_lowres.pfm and the two masks.
void save_synthetic(const std::filesystem::path& dir, const SyntheticScene& scene);

} // namespace lfd
