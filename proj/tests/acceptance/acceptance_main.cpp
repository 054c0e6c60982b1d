// Acceptance checks. Each criterion prints one PASS/FAIL line with its pinned
// tolerance; the exit status is non-zero when any selected criterion fails.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lfd/error.hpp"
#include "lfd/evaluate.hpp"
#include "lfd/global_opt.hpp"
#include "lfd/joint_refine.hpp"
#include "lfd/line_model.hpp"
#include "lfd/occlusion.hpp"
#include "lfd/pipeline.hpp"
#include "lfd/sepi.hpp"
#include "lfd/synthetic.hpp"
#include "support/oracles.hpp"
#include "support/scenes.hpp"

using namespace lfd;

namespace {

// Pinned tolerances.
constexpr double kEpsilonTolerance = 2.0 * (line_model::kSlopePitch + line_model::kInterceptPitch);
constexpr double kSepiTolerance = 1e-6;
constexpr double kPlanarFraction = 0.95;
constexpr double kOcclusionGain = 2.0;
constexpr double kPatchMse100 = 0.5;
constexpr double kDenseTolerance = 1e-8;

constexpr double kBudget1 = 60.0, kBudget2 = 30.0, kBudget3 = 120.0, kBudget4 = 120.0, kBudget5 = 120.0,
                 kBudget6 = 10.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Eigen::VectorXd vec(const Array2D<double>& a) {
  return Eigen::Map<const Eigen::VectorXd>(a.data().data(), static_cast<Eigen::Index>(a.size()));
}

double mse100_over(const Array2D<double>& d, const Array2D<double>& gt, const Array2D<std::uint8_t>& mask,
                   int border) {
  double acc = 0.0;
  int n = 0;
  for (int y = border; y < d.height() - border; ++y) {
    for (int x = border; x < d.width() - border; ++x) {
      if (!mask(y, x)) continue;
      const double e = d(y, x) - gt(y, x);
      acc += e * e;
      ++n;
    }
  }
  return n ? 100.0 * acc / n : 0.0;
}

// 1. Uncertain slope range vs brute-force preimage width.
Outcome epsilon_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> pick_q(2, 8);
  std::uniform_real_distribution<double> pick_b(0.0, 1.0);
  int compared = 0, agree = 0, monotone_breaks = 0, no_phase = 0;
  double worst = 0.0;
  std::string worst_case;
  for (int drawn = 0; drawn < 50;) {
    const int q = pick_q(rng);
    const int p = std::uniform_int_distribution<int>(1, q - 1)(rng);
    if (std::gcd(p, q) != 1) continue;
    ++drawn;
    const double b = pick_b(rng);
    double previous = std::numeric_limits<double>::infinity();
    for (int n : {2 * q, 4 * q, 8 * q}) {
      const std::vector<int> nodes = line_model::rasterize_line(static_cast<double>(p) / q, b, n);
      int a3 = -1;
      for (int phase = 0; phase < q && a3 < 0; ++phase)
        if (line_model::phase_matches(nodes, q, p, phase)) a3 = phase;
      if (a3 < 0) {
        ++no_phase;
        continue;
      }
      const double eps = line_model::uncertain_range(n, q, p, a3).epsilon;
      const double width = line_model::brute_force_slope_range(nodes).width();
      const double diff = std::abs(eps - width);
      ++compared;
      if (diff <= kEpsilonTolerance) ++agree;
      if (diff > worst) {
        worst = diff;
        worst_case = fmt("%d/%d n=%d eps=%.5f brute=%.5f", p, q, n, eps, width);
      }
      if (eps > previous) ++monotone_breaks;
      previous = eps;
    }
  }
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = agree == compared && no_phase == 0 && monotone_breaks == 0 && elapsed < kBudget1;
  o.detail = fmt("%d/%d strings within %.1e, %d monotonicity breaks, %d without phase; worst %s; %.1fs (< %.0fs)",
                 agree, compared, kEpsilonTolerance, monotone_breaks, no_phase, worst_case.c_str(), elapsed, kBudget1);
  return o;
}

// 2. SEPI photo variance vs direct multi-view reprojection.
Outcome sepi_reprojection() {
  const auto start = Clock::now();
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  const std::vector<double> cands = make_candidates(-2.5, 2.5, 75);
  double worst = 0.0;
  long long checked = 0, sample_mismatch = 0;
  for (int field = 0; field < 10; ++field) {
    LightField4D lf(9, 9, 32, 32, 3);
    for (float& v : lf.data()) v = u(rng);
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 32; ++x) {
        const InitialSlope r = initial_slope(lf, x, y, cands, ViewRange::full(lf));
        for (std::size_t k = 0; k < cands.size(); ++k) {
          const oracle::Reprojection o = oracle::reprojection_cost(lf, x, y, cands[k], 0, 8, 0, 8);
          if ((o.samples > 0) != static_cast<bool>(r.curve.defined[k])) {
            ++sample_mismatch;
            continue;
          }
          if (o.samples > 0) worst = std::max(worst, std::abs(o.cost - r.curve.variance[k]));
          ++checked;
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = worst <= kSepiTolerance && sample_mismatch == 0 && elapsed < kBudget2;
  o.detail = fmt("%lld costs, max |diff| %.2e (<= %.0e), %lld definedness mismatches; %.1fs (< %.0fs)", checked, worst,
                 kSepiTolerance, sample_mismatch, elapsed, kBudget2);
  return o;
}

// 3. Fronto-parallel plane recovery after the initial and joint stages.
Outcome planar_recovery() {
  const auto start = Clock::now();
  PipelineConfig cfg;
  cfg.sync();
  const double step = 5.0 / 74.0;
  bool ok = true;
  std::ostringstream detail;
  for (double d : {-1.5, 0.0, 0.75, 2.0}) {
    const SyntheticScene scene = generate_synthetic(scenes::single_plane(d, 48, 9));
    const SlopeField init = initial_depth_map(scene.lf, cfg.sepi);
    const SlopeField joint = refine_field(scene.lf, init, cfg.joint);
    const int margin = static_cast<int>(std::ceil(std::abs(d) * 4.0)) + 2;
    int total = 0, init_ok = 0, joint_ok = 0;
    for (int y = margin; y < 48 - margin; ++y) {
      for (int x = margin; x < 48 - margin; ++x) {
        ++total;
        if (std::abs(init.disparity.values(y, x) - d) <= step) ++init_ok;
        if (std::abs(joint.disparity.values(y, x) - d) <= step / 4.0) ++joint_ok;
      }
    }
    const double fi = static_cast<double>(init_ok) / total, fj = static_cast<double>(joint_ok) / total;
    ok = ok && fi >= kPlanarFraction && fj >= kPlanarFraction;
    detail << fmt("d=%g: %.1f%%/%.1f%%  ", d, 100.0 * fi, 100.0 * fj);
  }
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = ok && elapsed < kBudget3;
  o.detail = detail.str() + fmt("(init within %.4f / joint within %.4f, need >= %.0f%%); %.1fs (< %.0fs)", step,
                                step / 4.0, 100.0 * kPlanarFraction, elapsed, kBudget3);
  return o;
}

// 4. Occluded-band error with and without half-SEPI refinement.
Outcome occlusion_gain() {
  const auto start = Clock::now();
  const SyntheticScene scene = generate_synthetic(scenes::two_planes(0.5, 1.5, scenes::Side::Left, 48, 9));
  PipelineConfig all;
  PipelineConfig without = all;
  without.stages.occ_refine = false;
  const PipelineResult with_occ = run_pipeline(scene.lf, all, true);
  const PipelineResult no_occ = run_pipeline(scene.lf, without, true);
  const int border = 6;
  const double full = mse100_over(no_occ.disparity.values, scene.ground_truth, scene.occlusion_band, border);
  const double half = mse100_over(with_occ.disparity.values, scene.ground_truth, scene.occlusion_band, border);
  const double stage_full =
      mse100_over(with_occ.intermediates.initial.disparity.values, scene.ground_truth, scene.occlusion_band, border);
  const double stage_half = mse100_over(with_occ.intermediates.after_occlusion.disparity.values, scene.ground_truth,
                                        scene.occlusion_band, border);
  const double elapsed = seconds_since(start);
  Outcome o;
  const double ratio = full / std::max(half, 1e-12);
  o.pass = ratio >= kOcclusionGain && elapsed < kBudget4;
  o.detail = fmt("band MSEx100 pipeline %.3f (all) vs %.3f (no occ_refine), ratio %.1f (>= %.1f); stage only %.3f -> "
                 "%.3f; %.1fs (< %.0fs)",
                 half, full, ratio, kOcclusionGain, stage_half, stage_full, elapsed, kBudget4);
  return o;
}

// 5. Textureless patch error before and after propagation.
Outcome textureless_gain() {
  const auto start = Clock::now();
  bool ok = true;
  std::ostringstream detail;
  for (const auto& [name, gx, gy] : {std::tuple{"flat", 0.0, 0.0}, std::tuple{"tilted", 0.01, -0.008}}) {
    const SyntheticScene scene = generate_synthetic(scenes::textureless_patch(0.4, gx, gy, 48, 20, 9));
    PipelineConfig cfg;
    cfg.stages.global_opt = false;
    const PipelineResult r = run_pipeline(scene.lf, cfg, true);
    const double pre =
        mse100_over(r.intermediates.after_joint.disparity.values, scene.ground_truth, scene.textureless, 0);
    const double post =
        mse100_over(r.intermediates.after_textureless.disparity.values, scene.ground_truth, scene.textureless, 0);
    ok = ok && post <= kPatchMse100 && post < pre;
    detail << fmt("%s: %.3f -> %.3f  ", name, pre, post);
  }
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = ok && elapsed < kBudget5;
  o.detail = detail.str() + fmt("(patch MSEx100, need <= %.1f and decreasing); %.1fs (< %.0fs)", kPatchMse100, elapsed,
                                kBudget5);
  return o;
}

// 6. Global solve against dense oracles.
Outcome global_exactness() {
  const auto start = Clock::now();
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> ud(-2.0, 2.0), uw(0.05, 3.0), us(0.1, 5.0), ua(0.01, 1.0);
  auto random_field = [&](int h, int w, auto& dist) {
    Array2D<double> a(h, w);
    for (double& v : a.data()) v = dist(rng);
    return a;
  };
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Array2D<double> d = random_field(5, 5, ud), w = random_field(5, 5, uw), s = random_field(5, 5, us);
    GlobalParams g;
    g.alpha = 0.1;
    const Array2D<double> out = solve_global(d, w, s, g).disparity;
    const Eigen::VectorXd ref = oracle::minimize_energy(vec(d), vec(w), vec(s), 5, 5, g.alpha);
    for (int i = 0; i < 25; ++i) worst = std::max(worst, std::abs(out.data()[i] - ref[i]));
  }
  int energy_breaks = 0;
  std::uniform_int_distribution<int> side(1, 12);
  for (int trial = 0; trial < 100; ++trial) {
    const int h = side(rng), wd = side(rng);
    const Array2D<double> d = random_field(h, wd, ud), w = random_field(h, wd, uw), s = random_field(h, wd, us);
    GlobalParams g;
    g.alpha = ua(rng);
    const Array2D<double> out = solve_global(d, w, s, g).disparity;
    if (global_energy(d, out, w, s, g.alpha) > global_energy(d, d, w, s, g.alpha)) ++energy_breaks;
  }
  const Array2D<double> d = random_field(7, 9, ud), w = random_field(7, 9, uw), s = random_field(7, 9, us);
  GlobalParams zero;
  zero.alpha = 0.0;
  const bool bitwise = solve_global(d, w, s, zero).disparity == d;
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = worst <= kDenseTolerance && energy_breaks == 0 && bitwise && elapsed < kBudget6;
  o.detail = fmt("dense max |diff| %.2e (<= %.0e), %d/100 energy increases, alpha=0 bitwise %s; %.2fs (< %.0fs)", worst,
                 kDenseTolerance, energy_breaks, bitwise ? "yes" : "no", elapsed, kBudget6);
  return o;
}

// 7. Metric closed forms (ground truth zero so the products are exact).
Outcome metric_closed_forms() {
  const Array2D<double> gt(40, 40, 0.0);
  const EvalReport a = evaluate(Array2D<double>(40, 40, 0.1), gt);
  const EvalReport b = evaluate(Array2D<double>(40, 40, 0.05), gt);
  Outcome o;
  o.pass = a.all.mse100 == 1.0 && a.all.bpr == 1.0 && b.all.mse100 == 0.25 && b.all.bpr == 0.0;
  o.detail = fmt("0.1 -> mse100 %.17g bpr %.17g; 0.05 -> mse100 %.17g bpr %.17g (exact)", a.all.mse100, a.all.bpr,
                 b.all.mse100, b.all.bpr);
  return o;
}

// 9. Suite-average error: all stages vs each single-stage removal.
Outcome ablation_monotonicity() {
  const auto start = Clock::now();
  const std::vector<AblationRow> rows = ablation_configurations();
  const std::vector<scenes::NamedScene> suite = scenes::synthetic_suite();
  std::vector<double> mean(rows.size(), 0.0);
  for (const scenes::NamedScene& sc : suite) {
    const SyntheticScene scene = generate_synthetic(sc.spec);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      PipelineConfig cfg;
      cfg.stages = rows[i].stages;
      mean[i] += evaluate(run_pipeline(scene.lf, cfg).disparity.values, scene.ground_truth).all.mse100 / suite.size();
    }
  }
  bool ok = true;
  std::ostringstream detail;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && mean[0] > mean[i]) ok = false;
    detail << fmt("%s %.3f  ", rows[i].name.c_str(), mean[i]);
  }
  Outcome o;
  o.pass = ok;
  o.detail = detail.str() + fmt("(mean MSEx100 over %zu scenes; all must be <= every ablation); %.1fs", suite.size(),
                                seconds_since(start));
  return o;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "criterion numbers to run (default: all)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria = {
      {1, {"uncertain range vs brute force", epsilon_oracle}},
      {2, {"SEPI cost vs reprojection", sepi_reprojection}},
      {3, {"planar recovery", planar_recovery}},
      {4, {"occlusion gain", occlusion_gain}},
      {5, {"textureless gain", textureless_gain}},
      {6, {"global solve exactness", global_exactness}},
      {7, {"metric closed forms", metric_closed_forms}},
      {9, {"ablation monotonicity", ablation_monotonicity}},
  };
  if (selected.empty()) {
    for (const auto& [id, entry] : criteria) selected.push_back(id);
    selected.push_back(8);
    std::sort(selected.begin(), selected.end());
  }

  int failures = 0;
  for (int id : selected) {
    if (id == 8) {
      std::printf("INFO criterion 8 (benchmark tables): needs the HCI datasets; use `lfdepth evaluate` and "
                  "`lfdepth ablate`, expect the same order of magnitude\n");
      continue;
    }
    const auto it = criteria.find(id);
    if (it == criteria.end()) continue;
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, it->second.first, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
