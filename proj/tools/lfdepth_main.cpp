#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "lfd/debug_dump.hpp"
#include "lfd/error.hpp"
#include "lfd/io.hpp"
#include "lfd/line_model.hpp"
#include "lfd/pipeline.hpp"
#include "lfd/synthetic.hpp"

namespace fs = std::filesystem;
using namespace lfd;

namespace {

PipelineConfig load_config(const fs::path& lf_dir, const LayoutConfig& layout, const std::string& config_file,
                           int workers) {
  PipelineConfig base;
  base.sepi.d_min = layout.disp_min;
  base.sepi.d_max = layout.disp_max;
  base.workers = workers;
  PipelineConfig cfg = config_file.empty() ? base : PipelineConfig::load(config_file, base);
  if (workers > 0) cfg.workers = workers;
  cfg.sync();
  (void)lf_dir;
  return cfg;
}

std::optional<Array2D<double>> load_ground_truth(const fs::path& dir, const LayoutConfig& layout) {
  const fs::path gt = dir / layout.ground_truth;
  if (!fs::exists(gt)) return std::nullopt;
  return to_double(load_pfm(gt));
}

void print_metrics(std::ostream& out, const char* label, const RegionMetrics& m) {
  out << label << ": mse100=" << m.mse100 << " bpr=" << m.bpr << " pixels=" << m.count << '\n';
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Light-field depth estimation from stitched EPIs"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "Worker threads (default: LFDEPTH_WORKERS or hardware)");

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate the central-view disparity of a light field");
  std::string est_dir, est_config, est_out = ".", est_stages;
  bool est_dump = false;
  std::uint64_t est_seed = 1;
  est->add_option("lf_dir", est_dir, "Directory of sub-aperture views")->required()->check(CLI::ExistingDirectory);
  est->add_option("--config", est_config, "Pipeline configuration file")->check(CLI::ExistingFile);
  est->add_option("--out", est_out, "Output directory");
  est->add_option("--stages", est_stages, "Comma-separated enabled stages, or 'all'");
  est->add_flag("--dump-intermediates", est_dump, "Write per-stage maps and diagnostics");
  est->add_option("--seed", est_seed, "Seed for randomized components");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Score a disparity map against ground truth");
  std::string ev_result, ev_gt, ev_occ, ev_tlr;
  int ev_crop = 15;
  ev->add_option("result", ev_result, "Estimated disparity (PFM)")->required()->check(CLI::ExistingFile);
  ev->add_option("gt", ev_gt, "Ground-truth disparity (PFM)")->required()->check(CLI::ExistingFile);
  ev->add_option("--occ-mask", ev_occ, "Occluded-region mask (PNG)")->check(CLI::ExistingFile);
  ev->add_option("--tlr-mask", ev_tlr, "Textureless-region mask (PNG)")->check(CLI::ExistingFile);
  ev->add_option("--crop", ev_crop, "Border excluded from the metrics, px");

  // synth
  auto* sy = app.add_subcommand("synth", "Render a synthetic planar scene");
  std::string sy_scene, sy_out;
  std::optional<std::uint64_t> sy_seed;
  sy->add_option("scene", sy_scene, "Scene description file")->required()->check(CLI::ExistingFile);
  sy->add_option("--out", sy_out, "Output directory")->required();
  sy->add_option("--seed", sy_seed, "Override the scene seed");

  // ablate
  auto* ab = app.add_subcommand("ablate", "Run the module-removal configurations and compare");
  std::string ab_dir, ab_config, ab_out;
  int ab_crop = 15;
  ab->add_option("lf_dir", ab_dir, "Directory of sub-aperture views")->required()->check(CLI::ExistingDirectory);
  ab->add_option("--config", ab_config, "Pipeline configuration file")->check(CLI::ExistingFile);
  ab->add_option("--out", ab_out, "CSV path (default: stdout)");
  ab->add_option("--crop", ab_crop, "Border excluded from the metrics, px");

  // analyze-epi
  auto* an = app.add_subcommand("analyze-epi", "Digital line model sweep for one slope");
  double an_slope = 0.5, an_intercept = 0.0;
  int an_n = 64;
  an->add_option("--slope", an_slope, "Line slope in (0, 1]")->required();
  an->add_option("--n", an_n, "Largest line length")->required();
  an->add_option("--intercept", an_intercept, "Line intercept in [0, 1)");

  // dump-sepi
  auto* ds = app.add_subcommand("dump-sepi", "Write one stitched EPI and its cost curve");
  std::string ds_dir, ds_out = ".";
  int ds_x = 0, ds_y = 0;
  double ds_d = 0.0;
  ds->add_option("lf_dir", ds_dir, "Directory of sub-aperture views")->required()->check(CLI::ExistingDirectory);
  ds->add_option("--x", ds_x, "Central-view column")->required();
  ds->add_option("--y", ds_y, "Central-view row")->required();
  ds->add_option("--disparity", ds_d, "Disparity used for stitching");
  ds->add_option("--out", ds_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*est) {
      const LayoutConfig layout = LayoutConfig::for_directory(est_dir);
      const LightField4D lf = load_lightfield(est_dir, layout);
      PipelineConfig cfg = load_config(est_dir, layout, est_config, workers);
      cfg.seed = est_seed;
      if (!est_stages.empty()) cfg.stages = parse_stages(est_stages);
      const PipelineResult result = run_pipeline(lf, cfg, est_dump);
      fs::create_directories(est_out);
      save_pfm(fs::path(est_out) / "disp.pfm", to_float(result.disparity.values));
      save_png16(fs::path(est_out) / "preview.png", result.disparity.values, cfg.sepi.d_min, cfg.sepi.d_max);
      if (est_dump) dump_intermediates(fs::path(est_out) / "intermediates", lf, result);
      for (const StageTiming& t : result.timings) std::cerr << t.stage << ": " << t.seconds << " s\n";
      if (auto gt = load_ground_truth(est_dir, layout); gt && gt->same_shape(result.disparity.values))
        print_metrics(std::cout, "all", evaluate(result.disparity.values, *gt).all);
      return 0;
    }
    if (*ev) {
      const Array2D<double> result = to_double(load_pfm(ev_result));
      const Array2D<double> gt = to_double(load_pfm(ev_gt));
      Array2D<std::uint8_t> occ, tlr;
      EvalOptions opt;
      opt.crop = ev_crop;
      if (!ev_occ.empty()) {
        occ = load_mask_png(ev_occ);
        opt.occluded_mask = &occ;
      }
      if (!ev_tlr.empty()) {
        tlr = load_mask_png(ev_tlr);
        opt.textureless_mask = &tlr;
      }
      EvalReport report;
      try {
        report = evaluate(result, gt, opt);
      } catch (const Error& e) {
        if (e.code() != Errc::DimensionMismatch) throw;
        std::cerr << "error: " << e.what() << '\n';
        return 2;
      }
      print_metrics(std::cout, "all", report.all);
      if (report.occluded) print_metrics(std::cout, "occluded", *report.occluded);
      if (report.textureless) print_metrics(std::cout, "textureless", *report.textureless);
      return 0;
    }
    if (*sy) {
      SceneSpec spec = SceneSpec::load(sy_scene);
      if (sy_seed) spec.seed = *sy_seed;
      save_synthetic(sy_out, generate_synthetic(spec));
      return 0;
    }
    if (*ab) {
      const LayoutConfig layout = LayoutConfig::for_directory(ab_dir);
      const LightField4D lf = load_lightfield(ab_dir, layout);
      const PipelineConfig base = load_config(ab_dir, layout, ab_config, workers);
      const auto gt = load_ground_truth(ab_dir, layout);
      std::ofstream file;
      if (!ab_out.empty()) {
        file.open(ab_out);
        if (!file) fail(Errc::Io, "cannot write " + ab_out);
      }
      std::ostream& out = ab_out.empty() ? std::cout : file;
      out << "config,sepi_init,occ_refine,slope_refine,tlr_refine,global_opt,mse100,bpr,seconds\n";
      for (const AblationRow& row : ablation_configurations()) {
        PipelineConfig cfg = base;
        cfg.stages = row.stages;
        const PipelineResult r = run_pipeline(lf, cfg);
        double seconds = 0.0;
        for (const StageTiming& t : r.timings) seconds += t.seconds;
        const StageToggles& s = row.stages;
        out << row.name << ',' << s.sepi_init << ',' << s.occ_refine << ',' << s.slope_refine << ','
            << s.tlr_refine << ',' << s.global_opt << ',';
        if (gt && gt->same_shape(r.disparity.values)) {
          EvalOptions opt;
          opt.crop = ab_crop;
          const RegionMetrics m = evaluate(r.disparity.values, *gt, opt).all;
          out << m.mse100 << ',' << m.bpr;
        } else {
          out << ',';
        }
        out << ',' << seconds << '\n';
      }
      return 0;
    }
    if (*an) {
      line_model::write_sweep_csv(std::cout, line_model::sweep(an_slope, an_intercept, an_n));
      return 0;
    }
    if (*ds) {
      const LayoutConfig layout = LayoutConfig::for_directory(ds_dir);
      const LightField4D lf = load_lightfield(ds_dir, layout);
      if (ds_x < 0 || ds_x >= lf.width() || ds_y < 0 || ds_y >= lf.height())
        fail(Errc::OutOfRange, "pixel outside the central view");
      fs::create_directories(ds_out);
      write_sepi_png(fs::path(ds_out) / "sepi.png", build_sepi(lf, ds_x, ds_y, ds_d, ViewRange::full(lf)));
      const auto candidates = make_candidates(layout.disp_min, layout.disp_max, SepiConfig{}.candidate_count);
      const InitialSlope slope = initial_slope(lf, ds_x, ds_y, candidates, ViewRange::full(lf));
      write_cost_curve_csv(fs::path(ds_out) / "cost_curve.csv", slope.curve);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
