#include <doctest.h>

#include <numeric>
#include <random>
#include <sstream>

#include "lfd/error.hpp"
#include "lfd/line_model.hpp"
#include "support/oracles.hpp"

using namespace lfd;
using namespace lfd::line_model;

TEST_SUITE("line_model") {

TEST_CASE("rasterized nodes") {
  CHECK(rasterize_line(0.5, 0.0, 5) == std::vector<int>{0, 1, 0, 1});
  CHECK(rasterize_line(0.0, 0.3, 6) == std::vector<int>{0, 0, 0, 0, 0});
  CHECK(rasterize_line(-0.5, 0.0, 5) == rasterize_line(0.5, 0.0, 5));
  CHECK_THROWS_AS(rasterize_line(0.5, 0.0, 1), Error);
}

TEST_CASE("slope 1.5 yields the alternating 2,1 family") {
  bool seen = false;
  for (int bi = 0; bi < 100 && !seen; ++bi) {
    seen = rasterize_line(1.5, bi / 100.0, 7) == std::vector<int>{2, 1, 2, 1, 2, 1};
  }
  CHECK(seen);
}

TEST_CASE("period inspection") {
  LineString a = string_params({0, 1, 0, 1, 0, 1});
  CHECK(a.a1 == 2);
  CHECK(a.a2 == 1);
  CHECK(a.n == 7);
  CHECK(phase_matches(a.nodes, a.a1, a.a2, a.a3));

  LineString b = string_params({2, 1, 2, 1});
  CHECK(b.a1 == 2);
  CHECK(b.a2 == 3);
  CHECK(phase_matches(b.nodes, b.a1, b.a2, b.a3));

  LineString z = string_params({0, 0, 0});
  CHECK(z.a1 == 1);
  CHECK(z.a2 == 0);
}

TEST_CASE("aperiodic strings have no period") {
  CHECK_THROWS_AS(string_params({0, 1, 1, 0, 0}), Error);
  CHECK_THROWS_AS(string_params({}), Error);
}

TEST_CASE("random rational slopes recover their reduced period") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int q = std::uniform_int_distribution<int>(1, 8)(rng);
    const int p = std::uniform_int_distribution<int>(0, 3 * q)(rng);
    const double b = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const int g = std::gcd(p, q);
    const int a1 = p == 0 ? 1 : q / g, a2 = p == 0 ? 0 : p / g;
    const std::vector<int> nodes = rasterize_line(static_cast<double>(p) / q, b, 4 * q);
    LineString ls = string_params(nodes);
    INFO("p=" << p << " q=" << q << " b=" << b);
    CHECK(ls.a1 == a1);
    CHECK(ls.a2 == a2);
    // The recovered phase is the smallest one reproducing the first period.
    CHECK(phase_matches(nodes, ls.a1, ls.a2, ls.a3));
    for (int a3 = 0; a3 < ls.a3; ++a3) CHECK_FALSE(phase_matches(nodes, ls.a1, ls.a2, a3));
  }
}

TEST_CASE("uncertain range shrinks as the string grows") {
  for (auto [a1, a2] : {std::pair{2, 1}, {3, 1}, {5, 2}, {7, 3}, {8, 5}}) {
    for (int a3 = 0; a3 < a1; ++a3) {
      double prev = 1e9;
      for (int n = 2 * (a1 + a2); n <= 512; n *= 2) {
        const UncertaintyRange r = uncertain_range(n, a1, a2, a3);
        CHECK(r.epsilon > 0.0);
        CHECK(r.epsilon < prev);
        CHECK(r.L1 > r.F2);
        CHECK(r.L2 > r.F1);
        prev = r.epsilon;
      }
    }
  }
}

TEST_CASE("uncertain range needs n > a1 + a2") {
  CHECK_THROWS_AS(uncertain_range(3, 2, 1, 0), Error);
  CHECK_NOTHROW(uncertain_range(4, 2, 1, 0));
  CHECK_THROWS_AS(uncertain_range(9, 2, 1, 2), Error);
}

TEST_CASE("slope 1/2 at nine pixels matches the exact preimage") {
  for (double b : {0.0, 0.3, 0.7}) {
    const std::vector<int> nodes = rasterize_line(0.5, b, 9);
    const LineString ls = string_params(nodes);
    const double eps = uncertain_range(9, ls.a1, ls.a2, ls.a3).epsilon;
    CHECK(eps == doctest::Approx(oracle::exact_slope_interval(nodes).width()).epsilon(1e-9));
    CHECK(std::abs(eps - brute_force_slope_range(nodes).width()) <= 2 * (kSlopePitch + kInterceptPitch));
  }
}

TEST_CASE("brute force contains the generating slope") {
  const SlopeInterval r = brute_force_slope_range(rasterize_line(0.5, 0.0, 5));
  CHECK(r.k_low <= 0.5);
  CHECK(r.k_high >= 0.5);
}

TEST_CASE("all-zero string covers slopes below one half") {
  const SlopeInterval r = brute_force_slope_range({0, 0});
  CHECK(r.k_low == 0.0);
  CHECK(std::abs(r.k_high - 0.5) <= 2 * kSlopePitch);
  const oracle::ExactInterval exact = oracle::exact_slope_interval({0, 0});
  CHECK(exact.hi_num == 1);
  CHECK(exact.hi_den == 2);
}

TEST_CASE("brute force agrees with the exact oracle") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int q = std::uniform_int_distribution<int>(2, 6)(rng);
    const int p = std::uniform_int_distribution<int>(1, q - 1)(rng);
    const double b = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const std::vector<int> nodes = rasterize_line(static_cast<double>(p) / q, b, 3 * q);
    const oracle::ExactInterval exact = oracle::exact_slope_interval(nodes);
    const SlopeInterval bf = brute_force_slope_range(nodes);
    INFO("p=" << p << " q=" << q << " b=" << b);
    CHECK(std::abs(bf.width() - exact.width()) <= 2 * (kSlopePitch + kInterceptPitch));
  }
}

TEST_CASE("sweep emits a CSV row per admissible n") {
  const std::vector<SweepRow> rows = sweep(0.5, 0.0, 12);
  REQUIRE_FALSE(rows.empty());
  for (const SweepRow& r : rows) CHECK(r.n > r.a1 + r.a2);
  std::ostringstream out;
  write_sweep_csv(out, rows);
  CHECK(out.str().rfind("n,a1,a2,a3,epsilon,bruteforce_width\n", 0) == 0);
}

} // TEST_SUITE
