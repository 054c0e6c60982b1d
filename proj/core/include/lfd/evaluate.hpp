#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lfd/array2d.hpp"

namespace lfd {

struct RegionMetrics {
  double mse100 = 0.0; // 100 * mean squared error
  double bpr = 0.0;    // share of pixels with |error| > threshold
  int count = 0;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct EvalReport {
  RegionMetrics all;
  std::optional<RegionMetrics> occluded;
  std::optional<RegionMetrics> textureless;
  std::vector<StageTiming> timings;
};

struct EvalOptions {
  int crop = 15;                  // border excluded on every side
  double bad_threshold = 0.07;
  const Array2D<std::uint8_t>* occluded_mask = nullptr;
  const Array2D<std::uint8_t>* textureless_mask = nullptr;
};

/// Metrics over pixels inside the crop where both maps are finite; region
/// metrics further restricted to their masks. Throws DimensionMismatch.
EvalReport evaluate(const Array2D<double>& result, const Array2D<double>& ground_truth, const EvalOptions& opt = {});

/// Metrics over an explicit pixel mask (crop and finiteness still apply).
RegionMetrics region_metrics(const Array2D<double>& result, const Array2D<double>& ground_truth,
                             const Array2D<std::uint8_t>* mask, const EvalOptions& opt);

} // namespace lfd
