#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "lfd/superpixel.hpp"

using namespace lfd;

namespace {

Image noise_image(int h, int w, unsigned seed) {
  Image img(h, w, 3);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  // Smooth colour field (bilinear over a 32 px lattice) plus mild noise.
  constexpr int cell = 32;
  const int gh = h / cell + 2, gw = w / cell + 2;
  std::vector<float> lattice(static_cast<std::size_t>(gh * gw * 3));
  for (float& v : lattice) v = u(rng);
  auto node = [&](int j, int i, int c) { return lattice[(j * gw + i) * 3 + c]; };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int j = y / cell, i = x / cell;
      const float fy = static_cast<float>(y % cell) / cell, fx = static_cast<float>(x % cell) / cell;
      for (int c = 0; c < 3; ++c) {
        const float top = node(j, i, c) * (1 - fx) + node(j, i + 1, c) * fx;
        const float bottom = node(j + 1, i, c) * (1 - fx) + node(j + 1, i + 1, c) * fx;
        img.at(y, x, c) = std::clamp(top * (1 - fy) + bottom * fy + 0.05f * (u(rng) - 0.5f), 0.0f, 1.0f);
      }
    }
  }
  return img;
}

// Every label is a single 4-connected region.
bool connected(const Array2D<int>& labels, int count) {
  const int H = labels.height(), W = labels.width();
  std::vector<int> seen_components(count, 0);
  Array2D<std::uint8_t> visited(H, W, 0);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      if (visited(y, x)) continue;
      const int l = labels(y, x);
      if (++seen_components[l] > 1) return false;
      std::vector<std::pair<int, int>> stack{{y, x}};
      visited(y, x) = 1;
      while (!stack.empty()) {
        auto [cy, cx] = stack.back();
        stack.pop_back();
        const int ny[4] = {cy - 1, cy + 1, cy, cy}, nx[4] = {cx, cx, cx - 1, cx + 1};
        for (int k = 0; k < 4; ++k) {
          if (!labels.contains(ny[k], nx[k]) || visited(ny[k], nx[k]) || labels(ny[k], nx[k]) != l) continue;
          visited(ny[k], nx[k]) = 1;
          stack.push_back({ny[k], nx[k]});
        }
      }
    }
  }
  return true;
}

} // namespace

TEST_SUITE("superpixel") {

TEST_CASE("size rule") {
  CHECK(default_superpixel_size(512, 512) == 15);
  CHECK(default_superpixel_size(256, 512) == 15);
  CHECK(default_superpixel_size(768, 512) == 17);
}

TEST_CASE("512x512 count near the grid count") {
  const Image img = noise_image(512, 512, 4);
  const SuperpixelSeg seg = segment_superpixels(img, SlicParams{15, 10.0, 10});
  const double expected = (512.0 / 15.0) * (512.0 / 15.0);
  INFO("count " << seg.count());
  CHECK(seg.count() >= 0.8 * expected);
  CHECK(seg.count() <= 1.2 * expected);
}

TEST_CASE("constant image gives a regular grid") {
  const Image img(60, 45, 3, 0.5f);
  const SuperpixelSeg seg = segment_superpixels(img, SlicParams{15, 10.0, 10});
  CHECK(seg.count() == 4 * 3);
  for (const Superpixel& sp : seg.superpixels) {
    CHECK(sp.n == 225);
    int x0 = 1 << 20, x1 = -1, y0 = 1 << 20, y1 = -1;
    for (int idx : sp.pixels) {
      x0 = std::min(x0, idx % 45);
      x1 = std::max(x1, idx % 45);
      y0 = std::min(y0, idx / 45);
      y1 = std::max(y1, idx / 45);
    }
    CHECK((x1 - x0 + 1) * (y1 - y0 + 1) == sp.n);
  }
}

TEST_CASE("labels partition the image into connected regions") {
  const Image img = noise_image(70, 90, 9);
  const SuperpixelSeg seg = segment_superpixels(img, SlicParams{12, 10.0, 10});
  int total = 0;
  for (const Superpixel& sp : seg.superpixels) total += sp.n;
  CHECK(total == 70 * 90);
  CHECK(connected(seg.labels, seg.count()));
  for (const Superpixel& sp : seg.superpixels) {
    CHECK(sp.n > 0);
    for (int j : sp.neighbors) {
      const auto& back = seg.superpixels[j].neighbors;
      CHECK(std::binary_search(back.begin(), back.end(), sp.id));
    }
  }
}

TEST_CASE("segmentation is deterministic") {
  const Image img = noise_image(64, 64, 2);
  CHECK(slic(img, SlicParams{}) == slic(img, SlicParams{}));
}

TEST_CASE("segmentation statistics") {
  Array2D<int> labels(4, 6, 0);
  for (int y = 0; y < 4; ++y)
    for (int x = 3; x < 6; ++x) labels(y, x) = 1;
  Image img(4, 6, 3, 0.2f);
  for (int y = 0; y < 4; ++y)
    for (int x = 3; x < 6; ++x) img.at(y, x, 1) = 0.9f;
  Array2D<double> depth(4, 6, 1.0);
  for (int y = 0; y < 4; ++y) depth(y, 5) = 4.0;
  const SuperpixelSeg seg = build_segmentation(labels, img, &depth);
  REQUIRE(seg.count() == 2);
  CHECK(seg.superpixels[0].cx == doctest::Approx(1.0));
  CHECK(seg.superpixels[1].cx == doctest::Approx(4.0));
  CHECK(seg.superpixels[0].boundary.size() == 4u);
  CHECK(seg.superpixels[1].mean_value == doctest::Approx(0.9));
  CHECK(seg.superpixels[1].mean_depth == doctest::Approx(2.0));
  CHECK(seg.superpixels[0].neighbors == std::vector<int>{1});
  CHECK(seg.is_boundary(0, 2));
  CHECK_FALSE(seg.is_boundary(0, 1));
}

} // TEST_SUITE
