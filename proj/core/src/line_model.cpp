#include "lfd/line_model.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <string>

#include "lfd/error.hpp"

namespace lfd::line_model {

namespace {

long long floor_div(long long num, long long den) {
  long long q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

// floor(a2/a1 * v) for integer v, exact.
long long floor_ratio(int a2, int a1, long long v) { return floor_div(static_cast<long long>(a2) * v, a1); }

bool reproduces(const std::vector<int>& nodes, double k, double b) {
  double prev = std::floor(b);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double next = std::floor(k * static_cast<double>(i + 1) + b);
    if (next - prev != nodes[i]) return false;
    prev = next;
  }
  return true;
}

} // namespace

std::vector<int> rasterize_line(double slope, double intercept, int n) {
  if (n < 2) fail(Errc::PreconditionViolated, "a line string needs at least 2 pixels");
  const double k = std::abs(slope);
  std::vector<int> nodes(static_cast<std::size_t>(n - 1));
  for (int i = 0; i + 1 < n; ++i) {
    nodes[i] = static_cast<int>(std::floor(k * (i + 1) + intercept) - std::floor(k * i + intercept));
  }
  return nodes;
}

bool phase_matches(const std::vector<int>& nodes, int a1, int a2, int a3) {
  if (static_cast<int>(nodes.size()) < a1) return false;
  for (int i = 1; i <= a1; ++i) {
    const long long s = floor_ratio(a2, a1, i - a3) - floor_ratio(a2, a1, i - a3 - 1);
    if (s != nodes[i - 1]) return false;
  }
  return true;
}

LineString string_params(const std::vector<int>& nodes) {
  const int m = static_cast<int>(nodes.size());
  if (m == 0) fail(Errc::NoPeriodFound, "empty string");
  // A period must be seen at least twice to be distinguished from an aperiodic
  // prefix; p = m is accepted only for single-node strings.
  for (int p = 1; p <= m; ++p) {
    if (p > 1 && 2 * p > m) break;
    bool periodic = true;
    for (int i = p; i < m && periodic; ++i) periodic = nodes[i] == nodes[i - p];
    if (!periodic) continue;

    const int a2 = std::accumulate(nodes.begin(), nodes.begin() + p, 0);
    if (std::gcd(p, a2) != 1 && !(a2 == 0 && p == 1)) continue; // not a single digital line period
    for (int a3 = 0; a3 < p; ++a3) {
      if (phase_matches(nodes, p, a2, a3)) return LineString{nodes, m + 1, p, a2, a3};
    }
  }
  fail(Errc::NoPeriodFound, "no full period fits a string of " + std::to_string(m) + " nodes");
}

UncertaintyRange uncertain_range(int n, int a1, int a2, int a3) {
  if (a1 < 1 || a2 < 0 || a3 < 0 || a3 >= a1) fail(Errc::PreconditionViolated, "invalid string parameters");
  if (n <= a1 + a2) {
    fail(Errc::PreconditionViolated,
         "uncertain range needs n > a1 + a2 (n=" + std::to_string(n) + ", a1+a2=" + std::to_string(a1 + a2) + ")");
  }
  const long long last = n - 1;
  UncertaintyRange r;
  r.F1 = a3;
  r.F2 = static_cast<int>(a3 + a2 - floor_div(a3 + a2, a1) * a1);
  r.L1 = static_cast<int>(a3 + floor_div(last - a3, a1) * a1);
  r.L2 = static_cast<int>(a3 + a2 + floor_div(last - a3 - a2, a1) * a1);
  const int span_a = r.L2 - r.F1;
  const int span_b = r.L1 - r.F2;
  if (span_a <= 0 || span_b <= 0) {
    fail(Errc::PreconditionViolated, "string too short for both lattice anchor pairs");
  }
  r.epsilon = (1.0 / a1) * (1.0 / span_a + 1.0 / span_b);
  return r;
}

SlopeInterval brute_force_slope_range(const std::vector<int>& nodes) {
  if (nodes.empty()) fail(Errc::PreconditionViolated, "empty node string");
  const int m = static_cast<int>(nodes.size());
  const int total = std::accumulate(nodes.begin(), nodes.end(), 0);
  // Any reproducing line rises total +- 1 over m steps, which bounds the scan.
  const double k_begin = std::max(0.0, (total - 1.0) / m);
  const double k_end = (total + 1.0) / m;
  const long long k_steps = static_cast<long long>(std::ceil((k_end - k_begin) / kSlopePitch));
  const int b_steps = static_cast<int>(std::lround(1.0 / kInterceptPitch));

  bool found = false;
  SlopeInterval out{0.0, 0.0};
  for (long long ki = 0; ki <= k_steps; ++ki) {
    const double k = k_begin + static_cast<double>(ki) * kSlopePitch;
    for (int bi = 0; bi < b_steps; ++bi) {
      const double b = static_cast<double>(bi) * kInterceptPitch;
      if (!reproduces(nodes, k, b)) continue;
      if (!found) out.k_low = k;
      out.k_high = k;
      found = true;
      break;
    }
  }
  if (!found) fail(Errc::EmptyPreimage, "no grid line reproduces the string");
  return out;
}

std::vector<SweepRow> sweep(double slope, double intercept, int max_n) {
  std::vector<SweepRow> rows;
  for (int n = 2; n <= max_n; ++n) {
    const std::vector<int> nodes = rasterize_line(slope, intercept, n);
    LineString ls;
    try {
      ls = string_params(nodes);
    } catch (const Error&) {
      continue;
    }
    if (n <= ls.a1 + ls.a2) continue;
    UncertaintyRange ur;
    try {
      ur = uncertain_range(n, ls.a1, ls.a2, ls.a3);
    } catch (const Error&) {
      continue;
    }
    const SlopeInterval bf = brute_force_slope_range(nodes);
    rows.push_back(SweepRow{n, ls.a1, ls.a2, ls.a3, ur.epsilon, bf.width()});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "n,a1,a2,a3,epsilon,bruteforce_width\n";
  out << std::setprecision(10);
  for (const SweepRow& r : rows) {
    out << r.n << ',' << r.a1 << ',' << r.a2 << ',' << r.a3 << ',' << r.epsilon << ',' << r.bruteforce_width << '\n';
  }
}

} // namespace lfd::line_model
