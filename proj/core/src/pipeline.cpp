#include "lfd/pipeline.hpp"

#include <chrono>
#include <set>
#include <sstream>

#include "lfd/error.hpp"

namespace lfd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

class KeyCheck {
public:
  KeyCheck(const KvSection& s, std::initializer_list<const char*> keys) : s_(s), keys_(keys.begin(), keys.end()) {}
  void verify() const {
    for (const auto& [k, v] : s_.entries)
      if (!keys_.count(k)) fail(Errc::BadConfig, "unknown key '" + k + "' in [" + s_.name + "]");
  }

private:
  const KvSection& s_;
  std::set<std::string> keys_;
};

std::vector<int> parse_offsets(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      fail(Errc::BadConfig, "bad offset '" + item + "'");
    }
  }
  if (out.empty()) fail(Errc::BadConfig, "empty offset list");
  return out;
}

CouplingMode parse_coupling(const std::string& s) {
  if (s == "sum") return CouplingMode::Sum;
  if (s == "geometric") return CouplingMode::GeometricMean;
  if (s == "literal") return CouplingMode::Literal;
  fail(Errc::BadConfig, "coupling must be sum, geometric or literal");
}

template <class F>
auto timed(const char* stage, std::vector<StageTiming>& timings, F&& fn) {
  const auto start = std::chrono::steady_clock::now();
  try {
    auto result = fn();
    timings.push_back({stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
    return result;
  } catch (const Error& e) {
    throw Error(e.code(), std::string(stage) + ": " + e.message());
  }
}

} // namespace

StageToggles parse_stages(const std::string& list) {
  StageToggles t{false, false, false, false, false};
  std::istringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    if (item == "all") t = StageToggles{};
    else if (item == "sepi_init") t.sepi_init = true;
    else if (item == "occ_refine") t.occ_refine = true;
    else if (item == "slope_refine") t.slope_refine = true;
    else if (item == "tlr_refine") t.tlr_refine = true;
    else if (item == "global_opt") t.global_opt = true;
    else fail(Errc::BadConfig, "unknown stage '" + item + "'");
  }
  return t;
}

std::string format_stages(const StageToggles& t) {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(t.sepi_init, "sepi_init");
  add(t.occ_refine, "occ_refine");
  add(t.slope_refine, "slope_refine");
  add(t.tlr_refine, "tlr_refine");
  add(t.global_opt, "global_opt");
  return out;
}

PipelineConfig PipelineConfig::from_kv(const KvDocument& doc, PipelineConfig base) {
  PipelineConfig c = std::move(base);
  KeyCheck(doc.root, {"seed", "workers"}).verify();
  c.seed = static_cast<std::uint64_t>(doc.root.get_int("seed", static_cast<int>(c.seed)));
  c.workers = doc.root.get_int("workers", c.workers);
  for (const KvSection& s : doc.sections) {
    if (s.name == "sepi") {
      KeyCheck(s, {"d_min", "d_max", "candidates", "vertical_pass", "nearest_row"}).verify();
      c.sepi.d_min = s.get_double("d_min", c.sepi.d_min);
      c.sepi.d_max = s.get_double("d_max", c.sepi.d_max);
      c.sepi.candidate_count = s.get_int("candidates", c.sepi.candidate_count);
      c.sepi.vertical_pass = s.get_bool("vertical_pass", c.sepi.vertical_pass);
      c.sepi.options.nearest_row = s.get_bool("nearest_row", c.sepi.options.nearest_row);
    } else if (s.name == "occlusion") {
      KeyCheck(s, {"offset", "window_radius", "edge_dilation", "variance_ratio", "min_half_variance", "grow_limit",
                   "canny_sigma", "canny_low", "canny_high"}).verify();
      auto& o = c.occlusion;
      o.offset = s.get_int("offset", o.offset);
      o.window_radius = s.get_int("window_radius", o.window_radius);
      o.edge_dilation = s.get_int("edge_dilation", o.edge_dilation);
      o.variance_ratio = s.get_double("variance_ratio", o.variance_ratio);
      o.min_half_variance = s.get_double("min_half_variance", o.min_half_variance);
      o.grow_limit = s.get_int("grow_limit", o.grow_limit);
      o.canny.sigma = s.get_double("canny_sigma", o.canny.sigma);
      o.canny.low_ratio = s.get_double("canny_low", o.canny.low_ratio);
      o.canny.high_ratio = s.get_double("canny_high", o.canny.high_ratio);
    } else if (s.name == "joint") {
      KeyCheck(s, {"offsets", "occluded_offsets", "delta_count", "delta_span", "window_steps", "window_count"}).verify();
      auto& j = c.joint;
      if (auto v = s.find("offsets")) j.offsets = parse_offsets(*v);
      if (auto v = s.find("occluded_offsets")) j.occluded_offsets = parse_offsets(*v);
      j.delta_count = s.get_int("delta_count", j.delta_count);
      j.delta_span = s.get_double("delta_span", j.delta_span);
      j.window_steps = s.get_double("window_steps", j.window_steps);
      j.window_count = s.get_int("window_count", j.window_count);
    } else if (s.name == "textureless") {
      KeyCheck(s, {"superpixel_size", "compactness", "slic_iterations", "sharpness_threshold", "lti_threshold",
                   "lti_margin", "support_confidence", "support_weight_cap", "support_ring", "meanshift_bandwidth", "tau_out",
                   "pairwise", "irls_tolerance", "irls_max_iterations", "canny_sigma", "canny_low",
                   "canny_high"}).verify();
      auto& t = c.textureless;
      t.slic.size = s.get_int("superpixel_size", t.slic.size);
      t.slic.compactness = s.get_double("compactness", t.slic.compactness);
      t.slic.iterations = s.get_int("slic_iterations", t.slic.iterations);
      t.sharpness_threshold = s.get_double("sharpness_threshold", t.sharpness_threshold);
      t.lti_threshold = s.get_double("lti_threshold", t.lti_threshold);
      t.lti_margin = s.get_int("lti_margin", t.lti_margin);
      t.support_confidence = s.get_double("support_confidence", t.support_confidence);
      t.support_weight_cap = s.get_double("support_weight_cap", t.support_weight_cap);
      t.support_ring = s.get_int("support_ring", t.support_ring);
      t.meanshift_bandwidth = s.get_double("meanshift_bandwidth", t.meanshift_bandwidth);
      t.tau_out = s.get_double("tau_out", t.tau_out);
      t.pairwise = s.get_bool("pairwise", t.pairwise);
      t.irls_tolerance = s.get_double("irls_tolerance", t.irls_tolerance);
      t.irls_max_iterations = s.get_int("irls_max_iterations", t.irls_max_iterations);
      t.canny.sigma = s.get_double("canny_sigma", t.canny.sigma);
      t.canny.low_ratio = s.get_double("canny_low", t.canny.low_ratio);
      t.canny.high_ratio = s.get_double("canny_high", t.canny.high_ratio);
    } else if (s.name == "global") {
      KeyCheck(s, {"alpha", "coupling", "tolerance", "max_iterations", "tau0", "tau1", "tau2", "c_tl",
                   "c_occ_floor", "min_weight", "gradient_floor", "c_tl_elsewhere"}).verify();
      c.global.alpha = s.get_double("alpha", c.global.alpha);
      if (auto v = s.find("coupling")) c.global.mode = parse_coupling(*v);
      c.global.tolerance = s.get_double("tolerance", c.global.tolerance);
      c.global.max_iterations = s.get_int("max_iterations", c.global.max_iterations);
      c.confidence.tau0 = s.get_double("tau0", c.confidence.tau0);
      c.confidence.tau1 = s.get_double("tau1", c.confidence.tau1);
      c.confidence.c_tl = s.get_double("c_tl", c.confidence.c_tl);
      c.confidence.c_occ_floor = s.get_double("c_occ_floor", c.confidence.c_occ_floor);
      c.confidence.min_weight = s.get_double("min_weight", c.confidence.min_weight);
      c.smoothness.tau2 = s.get_double("tau2", c.smoothness.tau2);
      c.smoothness.c_tl = c.confidence.c_tl;
      c.smoothness.gradient_floor = s.get_double("gradient_floor", c.smoothness.gradient_floor);
      if (auto v = s.find("c_tl_elsewhere")) {
        if (*v == "one") c.smoothness.off_textureless = OffTexturelessCtl::One;
        else if (*v == "rectified") c.smoothness.off_textureless = OffTexturelessCtl::Rectified;
        else fail(Errc::BadConfig, "c_tl_elsewhere must be one or rectified");
      }
    } else if (s.name == "stages") {
      KeyCheck(s, {"sepi_init", "occ_refine", "slope_refine", "tlr_refine", "global_opt"}).verify();
      c.stages.sepi_init = s.get_bool("sepi_init", c.stages.sepi_init);
      c.stages.occ_refine = s.get_bool("occ_refine", c.stages.occ_refine);
      c.stages.slope_refine = s.get_bool("slope_refine", c.stages.slope_refine);
      c.stages.tlr_refine = s.get_bool("tlr_refine", c.stages.tlr_refine);
      c.stages.global_opt = s.get_bool("global_opt", c.stages.global_opt);
    } else {
      fail(Errc::BadConfig, "unknown section [" + s.name + "]");
    }
  }
  c.sync();
  return c;
}

PipelineConfig PipelineConfig::from_kv(const KvDocument& doc) { return from_kv(doc, PipelineConfig{}); }

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) { return load(path, PipelineConfig{}); }

PipelineConfig PipelineConfig::load(const std::filesystem::path& path, PipelineConfig base) {
  return from_kv(load_kv(path), std::move(base));
}

void PipelineConfig::sync() {
  sepi.workers = workers;
  occlusion.sepi = sepi;
  joint.sepi = sepi;
}

PipelineResult run_pipeline(const LightField4D& lf, const PipelineConfig& config, bool keep) {
  PipelineConfig cfg = config;
  cfg.sync();
  PipelineResult out;
  PipelineIntermediates& mid = out.intermediates;

  SepiConfig init = cfg.sepi;
  init.single_epi = !cfg.stages.sepi_init;
  SlopeField field = timed("sepi_init", out.timings, [&] { return initial_depth_map(lf, init); });
  if (keep) mid.initial = field;

  // Later stages follow the initial stage's view set.
  cfg.occlusion.sepi.single_epi = init.single_epi;
  cfg.joint.sepi.single_epi = init.single_epi;
  if (cfg.stages.occ_refine) {
    field = timed("occ_refine", out.timings,
                  [&] { return refine_occluded(lf, field, cfg.occlusion, keep ? &mid.occlusion : nullptr); });
    if (keep) mid.after_occlusion = field;
  }
  if (cfg.stages.slope_refine) {
    field = timed("slope_refine", out.timings,
                  [&] { return refine_field(lf, field, cfg.joint, keep ? &mid.joint : nullptr); });
    if (keep) mid.after_joint = field;
  }
  const Image central = lf.central_view();
  out.textureless_mask = Array2D<std::uint8_t>(lf.height(), lf.width(), 0);
  if (cfg.stages.tlr_refine) {
    TexturelessResult tl = timed("tlr_refine", out.timings,
                                 [&] { return refine_textureless(central, field, cfg.textureless); });
    field.disparity = tl.disparity;
    out.textureless_mask = tl.textureless;
    if (keep) {
      mid.after_textureless = field;
      mid.textureless = std::move(tl);
    }
  }
  out.disparity = field.disparity;
  if (cfg.stages.global_opt) {
    out.disparity.values = timed("global_opt", out.timings, [&] {
      const Array2D<double> w = update_confidence(field, lf.n_t(), lf.n_s(), out.textureless_mask, cfg.confidence);
      SmoothnessField s = build_smoothness(central, out.textureless_mask, cfg.smoothness);
      GlobalSolve solved = solve_global(field.disparity.values, w, s.s, cfg.global);
      if (keep) {
        mid.weights = w;
        mid.smoothness = std::move(s);
      }
      return solved.disparity;
    });
    out.disparity.valid.fill(1);
  }
  return out;
}

std::vector<AblationRow> ablation_configurations() {
  std::vector<AblationRow> rows;
  rows.push_back({"all", StageToggles{}});
  StageToggles t;
  t.sepi_init = false;
  rows.push_back({"without_sepi", t});
  t = {};
  t.occ_refine = false;
  rows.push_back({"without_occ_refine", t});
  t = {};
  t.slope_refine = false;
  rows.push_back({"without_slope_refine", t});
  t = {};
  t.tlr_refine = false;
  rows.push_back({"without_tlr_refine", t});
  return rows;
}

} // namespace lfd
