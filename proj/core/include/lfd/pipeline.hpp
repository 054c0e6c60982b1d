#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lfd/evaluate.hpp"
#include "lfd/global_opt.hpp"
#include "lfd/joint_refine.hpp"
#include "lfd/kv_config.hpp"
#include "lfd/occlusion.hpp"
#include "lfd/textureless.hpp"

namespace lfd {

struct StageToggles {
  bool sepi_init = true;    // off: single central-row EPI instead of the stitched EPI
  bool occ_refine = true;
  bool slope_refine = true;
  bool tlr_refine = true;
  bool global_opt = true;
  friend bool operator==(const StageToggles&, const StageToggles&) = default;
};

/// Comma-separated list of enabled stages (sepi_init, occ_refine,
/// slope_refine, tlr_refine, global_opt; "all" enables every stage).
StageToggles parse_stages(const std::string& list);
std::string format_stages(const StageToggles& t);

struct PipelineConfig {
  SepiConfig sepi;
  OcclusionConfig occlusion;
  JointConfig joint;
  TexturelessConfig textureless;
  ConfidenceParams confidence;
  SmoothnessParams smoothness;
  GlobalParams global;
  StageToggles stages;
  std::uint64_t seed = 1;
  int workers = 0;

  /// Sections [sepi] [occlusion] [joint] [textureless] [global] [stages];
  /// unknown keys are rejected. Keys absent from `doc` keep `base` values.
  static PipelineConfig from_kv(const KvDocument& doc);
  static PipelineConfig from_kv(const KvDocument& doc, PipelineConfig base);
  static PipelineConfig load(const std::filesystem::path& path);
  static PipelineConfig load(const std::filesystem::path& path, PipelineConfig base);

  /// Copies the shared candidate/sampling settings into the stage configs.
  void sync();
};

struct PipelineIntermediates {
  SlopeField initial, after_occlusion, after_joint, after_textureless;
  OcclusionInfo occlusion;
  JointDiagnostics joint;
  TexturelessResult textureless;
  Array2D<double> weights;
  SmoothnessField smoothness;
};

struct PipelineResult {
  DisparityMap disparity;
  Array2D<std::uint8_t> textureless_mask;
  std::vector<StageTiming> timings;
  PipelineIntermediates intermediates; // filled when requested
};

/// Runs the enabled stages in fixed order. Errors are rethrown with the
/// failing stage's name prefixed.
PipelineResult run_pipeline(const LightField4D& lf, const PipelineConfig& cfg, bool keep_intermediates = false);

struct AblationRow {
  std::string name;
  StageToggles stages;
};

/// Full pipeline and each of the four toggled modules removed in turn;
/// global optimization stays on throughout.
std::vector<AblationRow> ablation_configurations();

} // namespace lfd
