#include <doctest.h>

#include <cmath>

#include "lfd/error.hpp"
#include "lfd/io.hpp"
#include "lfd/synthetic.hpp"
#include "support/oracles.hpp"
#include "support/scenes.hpp"
#include "support/temp_dir.hpp"

using namespace lfd;

TEST_SUITE("synthetic") {

TEST_CASE("zero disparity renders identical views") {
  const SyntheticScene scene = generate_synthetic(scenes::single_plane(0.0, 24, 5));
  const Image c = scene.lf.central_view();
  for (int t = 0; t < 5; ++t)
    for (int s = 0; s < 5; ++s) CHECK(scene.lf.view(t, s) == c);
}

TEST_CASE("unit disparity shifts by exactly one pixel per view") {
  const SyntheticScene scene = generate_synthetic(scenes::single_plane(1.0, 24, 9));
  const LightField4D& lf = scene.lf;
  const int t0 = lf.center_t(), s0 = lf.center_s();
  for (int y = 0; y < 24; ++y)
    for (int x = 0; x + 1 < 24; ++x)
      for (int c = 0; c < 3; ++c) {
        CHECK(lf.at(t0, s0 + 1, y, x + 1, c) == lf.at(t0, s0, y, x, c));
        if (y + 1 < 24) CHECK(lf.at(t0 + 1, s0, y + 1, x, c) == lf.at(t0, s0, y, x, c));
      }
}

TEST_CASE("ground truth follows plane order and gradients") {
  SceneSpec spec = scenes::two_planes(0.5, 2.0, scenes::Side::Left, 32, 9);
  spec.planes[0].gx = 0.01;
  const SyntheticScene scene = generate_synthetic(spec);
  CHECK(scene.ground_truth(10, 5) == 2.0);
  CHECK(scene.plane_id(10, 5) == 1);
  CHECK(scene.ground_truth(10, 20) == doctest::Approx(0.5 + 0.01 * (20 - 16)));
  CHECK(scene.plane_id(10, 20) == 0);
}

TEST_CASE("occluded band width in the outer view") {
  const SceneSpec spec = scenes::two_planes(0.5, 2.0, scenes::Side::Left, 48, 9);
  const Array2D<std::uint8_t> band = occluded_in_view(spec, 4, 8);
  const int expected = static_cast<int>(std::floor((2.0 - 0.5) * 4));
  CHECK(expected == 6);
  for (int y = 0; y < 48; ++y) {
    int count = 0;
    for (int x = 0; x < 48; ++x) count += band(y, x);
    CHECK(count == expected);
    for (int x = 24; x < 30; ++x) CHECK(band(y, x) == 1);
  }
  // Views on the occluder's side see the whole background strip.
  const auto edge_view = occluded_in_view(spec, 4, 0);
  for (auto v : edge_view.data()) CHECK(v == 0);

  const SyntheticScene scene = generate_synthetic(spec);
  for (int y = 0; y < 48; ++y)
    for (int x = 0; x < 48; ++x) CHECK(scene.occlusion_band(y, x) == ((x >= 24 && x < 30) ? 1 : 0));
}

TEST_CASE("visible points reproject to their central colour") {
  // Integer disparities: exact correspondences.
  SceneSpec spec = scenes::two_planes(1.0, 2.0, scenes::Side::Left, 32, 5);
  SyntheticScene scene = generate_synthetic(spec);
  const LightField4D& lf = scene.lf;
  for (int t = 0; t < 5; ++t) {
    for (int s = 0; s < 5; ++s) {
      const Array2D<std::uint8_t> hidden = occluded_in_view(spec, t, s);
      for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 32; ++x) {
          const int d = static_cast<int>(scene.ground_truth(y, x));
          const int xs = x + d * (s - 2), ys = y + d * (t - 2);
          if (hidden(y, x) || xs < 0 || xs >= 32 || ys < 0 || ys >= 32) continue;
          for (int c = 0; c < 3; ++c) CHECK(std::abs(lf.at(t, s, ys, xs, c) - lf.at(2, 2, y, x, c)) <= 0.02f);
        }
      }
    }
  }

  // Fractional disparity on a smooth texture, through bilinear reprojection.
  SceneSpec smooth = scenes::single_plane(0.63, 32, 5);
  smooth.planes[0].texture = TextureKind::Sine;
  smooth.planes[0].scale = 16.0;
  scene = generate_synthetic(smooth);
  for (int y = 6; y < 26; y += 3) {
    for (int x = 6; x < 26; x += 3) {
      const oracle::Reprojection r = oracle::reprojection_cost(scene.lf, x, y, 0.63, 0, 4, 0, 4);
      CHECK(std::sqrt(r.cost / 3.0) <= 0.02);
    }
  }
}

TEST_CASE("textureless mask marks flat planes") {
  const SyntheticScene scene = generate_synthetic(scenes::textureless_patch(0.3, 0.0, 0.0, 48, 20, 5));
  CHECK(scene.textureless(24, 24) == 1);
  CHECK(scene.textureless(14, 14) == 1);
  CHECK(scene.textureless(13, 24) == 0);
  CHECK(scene.textureless(5, 5) == 0);
}

TEST_CASE("seeded and deterministic") {
  SceneSpec spec = scenes::single_plane(0.4, 24, 3);
  spec.noise_sigma = 0.01;
  const SyntheticScene a = generate_synthetic(spec), b = generate_synthetic(spec);
  CHECK(a.lf == b.lf);
  spec.seed += 1;
  CHECK_FALSE(generate_synthetic(spec).lf == a.lf);
  for (float v : a.lf.data()) {
    CHECK(v >= 0.0f);
    CHECK(v <= 1.0f);
  }
}

TEST_CASE("scene files") {
  const SceneSpec spec = SceneSpec::load(LFD_SCENE_DIR "/two_planes.cfg");
  CHECK(spec.n_t == 9);
  CHECK(spec.planes.size() == 2u);
  CHECK(spec.planes[1].x_max == 24.0);

  const SceneSpec parsed = SceneSpec::from_kv(parse_kv(
      "n_t = 3\nn_s = 5\nheight = 10\nwidth = 12\n[plane]\nd0 = 0.5\ntexture = checker\ncolor = 0.2 0.3 0.4\n"));
  CHECK(parsed.n_s == 5);
  CHECK(parsed.planes[0].texture == TextureKind::Checker);
  CHECK(parsed.planes[0].color[2] == 0.4);
  CHECK_THROWS_AS(SceneSpec::from_kv(parse_kv("[plane]\ntexture = marble\n")), Error);
  CHECK_THROWS_AS(SceneSpec::from_kv(parse_kv("bogus_key = 1\n")), Error);
}

TEST_CASE("saved scenes load back") {
  support::TempDir dir("synth");
  const SyntheticScene scene = generate_synthetic(scenes::two_planes(0.5, 1.5, scenes::Side::Left, 24, 3));
  save_synthetic(dir.path(), scene);
  const LightField4D lf = load_lightfield(dir.path(), LayoutConfig::for_directory(dir.path()));
  CHECK(lf.n_t() == 3);
  CHECK(load_pfm(dir / "gt_disp_lowres.pfm") == to_float(scene.ground_truth));
  CHECK(load_mask_png(dir / "occlusion_mask.png") == scene.occlusion_band);
  CHECK(load_mask_png(dir / "textureless_mask.png") == scene.textureless);
}

} // TEST_SUITE
