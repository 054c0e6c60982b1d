#pragma once

#include <iosfwd>
#include <vector>

// Discretization model of rasterized EPI lines: period strings and the
// uncertain slope range they leave. Analysis only; the depth pipeline does not
// call into this module.

namespace lfd::line_model {

/// Node i is the s-step between x-samples i and i+1 of a rasterized line.
struct LineString {
  std::vector<int> nodes;
  int n = 0;   // pixel count, nodes.size() + 1
  int a1 = 0;  // period length
  int a2 = 0;  // s-distance covered by one period
  int a3 = 0;  // phase offset in [0, a1)
};

struct UncertaintyRange {
  double epsilon = 0.0;
  int F1 = 0, F2 = 0, L1 = 0, L2 = 0;
};

struct SlopeInterval {
  double k_low = 0.0;
  double k_high = 0.0;
  double width() const { return k_high - k_low; }
};

/// Brute-force grid pitches (slope, intercept).
inline constexpr double kSlopePitch = 1e-4;
inline constexpr double kInterceptPitch = 1e-3;

/// node i = floor(slope*(i+1)+intercept) - floor(slope*i+intercept), i in [0, n-1).
/// Negative slopes are mirrored in x (the node string of |slope| is returned).
std::vector<int> rasterize_line(double slope, double intercept, int n);

/// Minimal period a1, its s-sum a2, and the smallest phase a3 satisfying
/// s_i = floor(a2/a1 (i-a3)) - floor(a2/a1 (i-a3-1)) for i = 1..a1.
/// Throws NoPeriodFound when no period (with a valid phase) fits the string.
LineString string_params(const std::vector<int>& nodes);

/// True when `a3` reproduces the first a1 nodes through the phase equation.
bool phase_matches(const std::vector<int>& nodes, int a1, int a2, int a3);

/// Uncertain slope range for a string of n pixels. The lattice anchors are
/// measured on pixel indices 0..n-1, i.e. with n-1 as the string length.
/// Requires n > a1 + a2.
UncertaintyRange uncertain_range(int n, int a1, int a2, int a3);

/// Scans slope (pitch kSlopePitch) x intercept (pitch kInterceptPitch) and
/// returns the slope extent of lines that rasterize to exactly `nodes`.
/// Throws EmptyPreimage when no grid line reproduces the string.
SlopeInterval brute_force_slope_range(const std::vector<int>& nodes);

struct SweepRow {
  int n = 0;
  int a1 = 0, a2 = 0, a3 = 0;
  double epsilon = 0.0;
  double bruteforce_width = 0.0;
};

/// Rasterizes `slope` at every pixel count from the smallest admissible one up
/// to `max_n` and evaluates both routes. Rows without a period are skipped.
std::vector<SweepRow> sweep(double slope, double intercept, int max_n);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

} // namespace lfd::line_model
