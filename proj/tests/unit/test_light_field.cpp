#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lfd/error.hpp"
#include "lfd/light_field.hpp"
#include "lfd/sampling.hpp"
#include "lfd/synthetic.hpp"
#include "support/scenes.hpp"

using namespace lfd;

namespace {

LightField4D random_lf(int n_t, int n_s, int h, int w, int c, unsigned seed) {
  LightField4D lf(n_t, n_s, h, w, c);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  for (float& v : lf.data()) v = u(rng);
  return lf;
}

} // namespace

TEST_SUITE("light_field") {

TEST_CASE("grid layout and centre") {
  LightField4D lf(9, 9, 16, 12, 3);
  CHECK(lf.n_t() == 9);
  CHECK(lf.n_s() == 9);
  CHECK(lf.center_t() == 4);
  CHECK(lf.center_s() == 4);
  CHECK(lf.view_count() == 81);
  CHECK(lf.data().size() == 81u * 16 * 12 * 3);
}

TEST_CASE("invalid dimensions are rejected") {
  CHECK_THROWS_AS(LightField4D(0, 9, 4, 4, 3), Error);
  CHECK_THROWS_AS(LightField4D(9, 9, 4, 4, 2), Error);
}

TEST_CASE("set_view and view round trip") {
  LightField4D lf = random_lf(3, 3, 5, 7, 3, 1);
  Image v = lf.view(2, 1);
  LightField4D other(3, 3, 5, 7, 3);
  other.set_view(2, 1, v);
  CHECK(other.view(2, 1) == v);
  CHECK_THROWS_AS(other.set_view(0, 0, Image(4, 7, 3)), Error);
}

TEST_CASE("validate flags out-of-range radiance") {
  LightField4D lf(1, 1, 2, 2, 1, 0.5f);
  CHECK_NOTHROW(lf.validate());
  lf.at(0, 0, 1, 1, 0) = 1.5f;
  CHECK_THROWS_AS(lf.validate(), Error);
  lf.at(0, 0, 1, 1, 0) = std::nanf("");
  CHECK_THROWS_AS(lf.validate(), Error);
}

TEST_CASE("constant light field gives constant EPIs") {
  LightField4D lf(5, 5, 8, 8, 3, 0.25f);
  Epi e = extract_epi(lf, 3, 2);
  CHECK(e.n_s == 5);
  CHECK(e.width == 8);
  CHECK(std::all_of(e.data.begin(), e.data.end(), [](float v) { return v == 0.25f; }));
}

TEST_CASE("EPI index outside the field throws") {
  LightField4D lf(3, 3, 8, 8, 1);
  CHECK_THROWS_AS(extract_epi(lf, 8, 0), Error);
  CHECK_THROWS_AS(extract_epi(lf, 0, 3), Error);
  CHECK_THROWS_AS(extract_epi(lf, -1, 0), Error);
}

TEST_CASE("EPIs tile the light field exactly once") {
  LightField4D lf = random_lf(3, 4, 5, 6, 3, 2);
  LightField4D rebuilt(3, 4, 5, 6, 3);
  for (int t = 0; t < 3; ++t) {
    for (int y = 0; y < 5; ++y) {
      Epi e = extract_epi(lf, y, t);
      for (int s = 0; s < 4; ++s)
        for (int x = 0; x < 6; ++x)
          for (int c = 0; c < 3; ++c) rebuilt.at(t, s, y, x, c) = e.at(s, x, c);
    }
  }
  CHECK(rebuilt == lf);
}

TEST_CASE("fronto-parallel plane traces straight EPI lines") {
  for (double d : {0.75, -1.25}) {
    // A smooth texture keeps the linear interpolation error of the check small.
    SceneSpec spec = scenes::single_plane(d, 32, 9);
    spec.planes[0].texture = TextureKind::Sine;
    spec.planes[0].scale = 16.0;
    const SyntheticScene scene = generate_synthetic(spec);
    const LightField4D& lf = scene.lf;
    const int s0 = lf.center_s();
    double worst = 0.0;
    for (int y = 4; y < 28; y += 3) {
      Epi e = extract_epi(lf, y, lf.center_t());
      for (int x0 = 10; x0 < 22; ++x0) {
        for (int s = 0; s < lf.n_s(); ++s) {
          // The point at x0 in the central view sits at x0 + d (s - s0) in view s.
          std::vector<float> row(e.data.begin() + static_cast<long>(s) * e.width * e.channels,
                                 e.data.begin() + static_cast<long>(s + 1) * e.width * e.channels);
          double v[3];
          REQUIRE(sample_row(row.data(), e.width, e.channels, x0 + d * (s - s0), v));
          for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(v[c] - e.at(s0, x0, c)));
        }
      }
    }
    INFO("max interpolation error " << worst);
    CHECK(worst <= 0.02);
  }
}

TEST_CASE("transpose is an involution with swapped shape") {
  LightField4D lf = random_lf(3, 5, 6, 4, 3, 3);
  LightField4D tr = transpose_lf(lf);
  CHECK(tr.n_t() == 5);
  CHECK(tr.n_s() == 3);
  CHECK(tr.height() == 4);
  CHECK(tr.width() == 6);
  CHECK(tr.at(1, 2, 3, 5, 1) == lf.at(2, 1, 5, 3, 1));
  CHECK(transpose_lf(tr) == lf);

  std::vector<float> a(lf.data().begin(), lf.data().end()), b(tr.data().begin(), tr.data().end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("transpose shape for a wide field") {
  LightField4D lf(9, 9, 256, 512, 1);
  LightField4D tr = transpose_lf(lf);
  CHECK(tr.height() == 512);
  CHECK(tr.width() == 256);
}

TEST_CASE("bilinear row sampling") {
  const std::vector<float> row = {0, 1, 4, 9};
  CHECK(*sample_bilinear(row, 2.0) == 4.0);
  CHECK(*sample_bilinear(row, 1.5) == doctest::Approx(2.5));
  CHECK(*sample_bilinear(row, 0.0) == 0.0);
  CHECK(*sample_bilinear(row, 3.0) == 9.0);
  CHECK_FALSE(sample_bilinear(row, 3.25).has_value());
  CHECK_FALSE(sample_bilinear(row, -0.01).has_value());
}

TEST_CASE("multi-channel row sampling") {
  const std::vector<float> row = {0, 10, 1, 20, 4, 30};
  double out[2];
  REQUIRE(sample_row(row.data(), 3, 2, 0.5, out));
  CHECK(out[0] == doctest::Approx(0.5));
  CHECK(out[1] == doctest::Approx(15.0));
  CHECK_FALSE(sample_row(row.data(), 3, 2, 2.5, out));
}

} // TEST_SUITE
