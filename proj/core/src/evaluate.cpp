#include "lfd/evaluate.hpp"

#include <cmath>

#include "lfd/error.hpp"

namespace lfd {

RegionMetrics region_metrics(const Array2D<double>& result, const Array2D<double>& ground_truth,
                             const Array2D<std::uint8_t>* mask, const EvalOptions& opt) {
  if (!result.same_shape(ground_truth)) fail(Errc::DimensionMismatch, "result and ground truth differ in size");
  if (mask && (mask->height() != result.height() || mask->width() != result.width()))
    fail(Errc::DimensionMismatch, "mask and ground truth differ in size");
  if (opt.crop < 0) fail(Errc::BadConfig, "crop must be non-negative");
  RegionMetrics m;
  double sq = 0.0;
  long long bad = 0;
  for (int y = opt.crop; y < result.height() - opt.crop; ++y) {
    for (int x = opt.crop; x < result.width() - opt.crop; ++x) {
      if (mask && !(*mask)(y, x)) continue;
      if (!std::isfinite(result(y, x)) || !std::isfinite(ground_truth(y, x))) continue;
      const double e = result(y, x) - ground_truth(y, x);
      // (10 e)^2 keeps decimal errors such as 0.1 exact.
      sq += (10.0 * e) * (10.0 * e);
      if (std::abs(e) > opt.bad_threshold) ++bad;
      ++m.count;
    }
  }
  if (m.count > 0) {
    m.mse100 = sq / m.count;
    m.bpr = static_cast<double>(bad) / m.count;
  }
  return m;
}

EvalReport evaluate(const Array2D<double>& result, const Array2D<double>& ground_truth, const EvalOptions& opt) {
  EvalReport r;
  r.all = region_metrics(result, ground_truth, nullptr, opt);
  if (opt.occluded_mask) r.occluded = region_metrics(result, ground_truth, opt.occluded_mask, opt);
  if (opt.textureless_mask) r.textureless = region_metrics(result, ground_truth, opt.textureless_mask, opt);
  return r;
}

} // namespace lfd
