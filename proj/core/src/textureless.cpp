#include "lfd/textureless.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <climits>
#include <cmath>
#include <deque>
#include <limits>

#include "lfd/error.hpp"

namespace lfd {

Array2D<std::uint8_t> mark_texture_points(const SlopeField& field, const Image& central_view,
                                          const TexturelessConfig& cfg) {
  Array2D<std::uint8_t> mask = canny(to_gray(central_view), cfg.canny);
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (field.disparity.valid(y, x) && field.sharpness(y, x) > cfg.sharpness_threshold) mask(y, x) = 1;
  return mask;
}

void compute_lti(SuperpixelSeg& seg, const Array2D<std::uint8_t>& texture_points, double threshold, int margin) {
  if (margin < 1) fail(Errc::BadConfig, "lti margin must be at least 1");
  const int H = seg.labels.height(), W = seg.labels.width();
  auto interior = [&](int y, int x, int m) {
    const int l = seg.labels(y, x);
    for (int dy = -m; dy <= m; ++dy) {
      const int reach = m - std::abs(dy);
      for (int dx = -reach; dx <= reach; ++dx) {
        const int ny = y + dy, nx = x + dx;
        if (ny >= 0 && ny < H && nx >= 0 && nx < W && seg.labels(ny, nx) != l) return false;
      }
    }
    return true;
  };
  for (Superpixel& sp : seg.superpixels) {
    // Thin superpixels have no deep interior; shrink the margin until some
    // pixel qualifies, and use every pixel when none does.
    int count = 0, textured = 0;
    for (int m = margin; m >= 0 && count == 0; --m) {
      textured = 0;
      for (int idx : sp.pixels) {
        const int y = idx / W, x = idx % W;
        if (m > 0 && !interior(y, x, m)) continue;
        ++count;
        textured += texture_points(y, x) ? 1 : 0;
      }
    }
    sp.lti = count > 0 ? static_cast<double>(textured) / count : 0.0;
    sp.textureless = sp.lti < threshold;
  }
}

PlaneFit fit_linear_depth(const std::vector<SupportPoint>& support) {
  PlaneFit fit;
  double sw = 0.0, mx = 0.0, my = 0.0, md = 0.0;
  for (const SupportPoint& p : support) {
    if (!(p.w > 0.0)) continue;
    sw += p.w;
    mx += p.w * p.x;
    my += p.w * p.y;
    md += p.w * p.d;
  }
  if (sw <= 0.0) return fit;
  mx /= sw;
  my /= sw;
  md /= sw;
  fit.defined = true;
  fit.constant = true;
  fit.c = md;

  int used = 0;
  double cxx = 0.0, cyy = 0.0, cxy = 0.0, cxd = 0.0, cyd = 0.0;
  for (const SupportPoint& p : support) {
    if (!(p.w > 0.0)) continue;
    ++used;
    const double dx = p.x - mx, dy = p.y - my, dd = p.d - md;
    cxx += p.w * dx * dx;
    cyy += p.w * dy * dy;
    cxy += p.w * dx * dy;
    cxd += p.w * dx * dd;
    cyd += p.w * dy * dd;
  }
  const double det = cxx * cyy - cxy * cxy;
  const double trace = cxx + cyy;
  if (used < 3 || trace <= 0.0 || det <= 1e-9 * trace * trace) return fit;
  fit.a = (cyy * cxd - cxy * cyd) / det;
  fit.b = (cxx * cyd - cxy * cxd) / det;
  fit.c = md - fit.a * mx - fit.b * my;
  fit.constant = false;
  return fit;
}

std::vector<int> mean_shift_clusters(const std::vector<double>& values, double bandwidth) {
  if (!(bandwidth > 0.0)) fail(Errc::BadConfig, "mean-shift bandwidth must be positive");
  const std::size_t n = values.size();
  std::vector<double> modes(n);
  for (std::size_t i = 0; i < n; ++i) {
    double m = values[i];
    for (int iter = 0; iter < 200; ++iter) {
      double num = 0.0, den = 0.0;
      for (double v : values) {
        const double u = (v - m) / bandwidth;
        const double k = std::exp(-0.5 * u * u);
        num += k * v;
        den += k;
      }
      const double next = num / den;
      const bool done = std::abs(next - m) < 1e-7 * bandwidth;
      m = next;
      if (done) break;
    }
    modes[i] = m;
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return modes[a] < modes[b]; });
  std::vector<int> ids(n, 0);
  int id = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && modes[order[k]] - modes[order[k - 1]] > 0.5 * bandwidth) ++id;
    ids[order[k]] = id;
  }
  return ids;
}

double l1_energy(const std::vector<L1Term>& terms, const std::vector<double>& x) {
  double e = 0.0;
  for (const L1Term& t : terms) {
    const double r = x[t.i] - (t.j >= 0 ? x[t.j] : 0.0) - t.target;
    e += t.weight * std::abs(r);
  }
  return e;
}

namespace {

std::vector<double> weighted_ls(int n, const std::vector<L1Term>& terms, const std::vector<double>& u) {
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const L1Term& t = terms[k];
    trip.emplace_back(t.i, t.i, u[k]);
    rhs[t.i] += u[k] * t.target;
    if (t.j >= 0) {
      trip.emplace_back(t.j, t.j, u[k]);
      trip.emplace_back(t.i, t.j, -u[k]);
      trip.emplace_back(t.j, t.i, -u[k]);
      rhs[t.j] -= u[k] * t.target;
    }
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success) fail(Errc::SolverNotConverged, "IRLS normal equations are singular");
  const Eigen::VectorXd x = solver.solve(rhs);
  return std::vector<double>(x.data(), x.data() + n);
}

} // namespace

L1Result solve_l1_irls(int n, const std::vector<L1Term>& terms, double tolerance, int max_iterations) {
  L1Result out;
  if (n == 0) {
    out.converged = true;
    return out;
  }
  for (const L1Term& t : terms)
    if (t.i < 0 || t.i >= n || t.j >= n || !(t.weight >= 0.0)) fail(Errc::PreconditionViolated, "bad L1 term");
  constexpr double kSmoothing = 1e-9;
  std::vector<double> u(terms.size());
  for (std::size_t k = 0; k < terms.size(); ++k) u[k] = terms[k].weight;
  out.x = weighted_ls(n, terms, u);
  double energy = l1_energy(terms, out.x);
  out.energy_history.push_back(energy);
  for (int iter = 0; iter < max_iterations; ++iter) {
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const L1Term& t = terms[k];
      const double r = out.x[t.i] - (t.j >= 0 ? out.x[t.j] : 0.0) - t.target;
      // Floor keeps zero-weight terms from dropping a variable out of the system.
      u[k] = std::max(t.weight, 1e-12) / std::sqrt(r * r + kSmoothing * kSmoothing);
    }
    const std::vector<double> next = weighted_ls(n, terms, u);
    const double next_energy = l1_energy(terms, next);
    out.iterations = iter + 1;
    if (next_energy > energy) {
      // Smoothing makes the step a descent step for the smoothed energy only.
      out.converged = energy - next_energy >= -tolerance * std::max(1.0, energy);
      return out;
    }
    const bool done = energy - next_energy <= tolerance * std::max(1.0, energy);
    out.x = next;
    energy = next_energy;
    out.energy_history.push_back(energy);
    if (done) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

namespace {

constexpr double kEps = 1e-6;

std::vector<int> propagation_layers(const SuperpixelSeg& seg) {
  std::vector<int> layer(seg.superpixels.size(), -1);
  std::deque<int> queue;
  for (const Superpixel& sp : seg.superpixels) {
    if (!sp.textureless) {
      layer[sp.id] = 0;
      queue.push_back(sp.id);
    }
  }
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    for (int j : seg.superpixels[i].neighbors) {
      if (layer[j] >= 0) continue;
      layer[j] = layer[i] + 1;
      queue.push_back(j);
    }
  }
  // Textureless islands with no textured superpixel anywhere around them.
  for (int& l : layer)
    if (l < 0) l = INT_MAX;
  return layer;
}

} // namespace

TexturelessResult propagate_textureless(SuperpixelSeg seg, const Array2D<std::uint8_t>& texture_points,
                                        const SlopeField& field, const TexturelessConfig& cfg) {
  const int H = field.height(), W = field.width();
  if (seg.labels.height() != H || seg.labels.width() != W || texture_points.height() != H ||
      texture_points.width() != W)
    fail(Errc::DimensionMismatch, "segmentation, texture mask and slope field differ in size");
  if (cfg.support_ring < 1 || cfg.tau_out < 0.0) fail(Errc::BadConfig, "support ring must be >= 1 and tau_out >= 0");

  TexturelessResult out;
  out.disparity = field.disparity;
  out.texture_points = texture_points;
  compute_lti(seg, texture_points, cfg.lti_threshold, cfg.lti_margin);
  const int K = seg.count();
  const std::vector<int> layer = propagation_layers(seg);

  std::vector<double> d_before(K, 0.0);
  for (const Superpixel& sp : seg.superpixels) {
    double acc = 0.0;
    int n = 0;
    for (int idx : sp.pixels) {
      if (!field.disparity.valid(idx / W, idx % W)) continue;
      acc += field.disparity.values(idx / W, idx % W);
      ++n;
    }
    d_before[sp.id] = n > 0 ? acc / n : 0.0;
  }

  // Linear predictions, textureless superpixels ordered edge to interior.
  std::vector<int> order;
  for (const Superpixel& sp : seg.superpixels)
    if (sp.textureless) order.push_back(sp.id);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return layer[a] < layer[b]; });

  Array2D<double> d_line(H, W, 0.0);
  std::vector<PlaneFit> planes(K);
  std::vector<int> support_count(K, 0);
  std::vector<char> propagated(K, 0);
  Array2D<int> stamp(H, W, -1);
  for (int i : order) {
    const Superpixel& sp = seg.superpixels[i];
    std::vector<SupportPoint> support;
    for (int idx : sp.pixels) {
      const int py = idx / W, px = idx % W;
      for (int y = std::max(0, py - cfg.support_ring); y <= std::min(H - 1, py + cfg.support_ring); ++y) {
        for (int x = std::max(0, px - cfg.support_ring); x <= std::min(W - 1, px + cfg.support_ring); ++x) {
          const int j = seg.labels(y, x);
          if (j == i || stamp(y, x) == i) continue;
          stamp(y, x) = i;
          if (!seg.superpixels[j].textureless) {
            if (!texture_points(y, x) || !field.disparity.valid(y, x)) continue;
            const double c = field.confidence(y, x);
            if (c < cfg.support_confidence) continue;
            support.push_back({double(x), double(y), field.disparity.values(y, x), std::min(c, cfg.support_weight_cap)});
          } else if (propagated[j] && layer[j] < layer[i]) {
            support.push_back({double(x), double(y), d_line(y, x), 1.0});
          }
        }
      }
    }
    support_count[i] = static_cast<int>(support.size());
    planes[i] = fit_linear_depth(support);
    if (!planes[i].defined) continue;
    for (int idx : sp.pixels) d_line(idx / W, idx % W) = planes[i](idx % W, idx / W);
    propagated[i] = 1;
  }

  std::vector<double> line_mean(K, 0.0), fitted_mean(K, 0.0);
  for (const Superpixel& sp : seg.superpixels) {
    if (propagated[sp.id]) {
      double acc = 0.0;
      for (int idx : sp.pixels) acc += d_line(idx / W, idx % W);
      line_mean[sp.id] = acc / sp.n;
      fitted_mean[sp.id] = line_mean[sp.id];
    } else {
      fitted_mean[sp.id] = d_before[sp.id];
    }
  }

  std::vector<double> values(K);
  for (int k = 0; k < K; ++k) values[k] = seg.superpixels[k].mean_value;
  const std::vector<int> cluster = K > 0 ? mean_shift_clusters(values, cfg.meanshift_bandwidth) : std::vector<int>{};

  std::vector<int> var(K, -1);
  int n_var = 0;
  for (int i : order) var[i] = n_var++;

  auto link_weight = [&](int i, int j) {
    const Superpixel& a = seg.superpixels[i];
    const Superpixel& b = seg.superpixels[j];
    const double grad = std::abs(fitted_mean[i] - fitted_mean[j]);
    const double dist = std::hypot(a.cx - b.cx, a.cy - b.cy);
    return cfg.tau_out / (std::max(grad, kEps) * std::max(dist, kEps));
  };
  auto admitted = [&](int i, int j) {
    // The value cue only separates textureless superpixels from each other.
    return !seg.superpixels[i].textureless || !seg.superpixels[j].textureless || cluster[i] == cluster[j];
  };

  std::vector<L1Term> terms;
  for (int i : order) terms.push_back({var[i], -1, d_before[i], 1.0});
  if (cfg.tau_out > 0.0) {
    if (!cfg.pairwise) {
      // Neighbour terms regrouped by the variable they constrain.
      std::vector<double> anchor(K, 0.0);
      for (const Superpixel& sp : seg.superpixels)
        for (int j : sp.neighbors)
          if (var[j] >= 0 && propagated[j] && admitted(sp.id, j)) anchor[j] += link_weight(sp.id, j);
      for (int j : order)
        if (anchor[j] > 0.0) terms.push_back({var[j], -1, line_mean[j], anchor[j]});
    } else {
      for (const Superpixel& sp : seg.superpixels) {
        for (int j : sp.neighbors) {
          const int i = sp.id;
          if (!admitted(i, j)) continue;
          const double w = link_weight(i, j);
          const double offset_i = propagated[i] ? line_mean[i] : fitted_mean[i];
          const double offset_j = propagated[j] ? line_mean[j] : fitted_mean[j];
          if (var[i] >= 0 && var[j] >= 0) {
            if (i < j) terms.push_back({var[i], var[j], offset_i - offset_j, w});
          } else if (var[i] >= 0) {
            // Textured neighbours enter at their fixed mean.
            terms.push_back({var[i], -1, d_before[j] + (offset_i - offset_j), w});
          }
        }
      }
    }
  }

  const L1Result solved = solve_l1_irls(n_var, terms, cfg.irls_tolerance, cfg.irls_max_iterations);
  out.energy_history = solved.energy_history;
  out.converged = solved.converged;

  out.textureless = Array2D<std::uint8_t>(H, W, 0);
  for (const Superpixel& sp : seg.superpixels) {
    SuperpixelUpdate u;
    u.id = sp.id;
    u.layer = layer[sp.id] == INT_MAX ? -1 : layer[sp.id];
    u.cluster = cluster[sp.id];
    u.support = support_count[sp.id];
    u.plane = planes[sp.id];
    u.d_before = d_before[sp.id];
    u.d_line = line_mean[sp.id];
    u.d_after = d_before[sp.id];
    if (sp.textureless) {
      const double x_hat = solved.x[var[sp.id]];
      u.d_after = x_hat;
      for (int idx : sp.pixels) {
        const int y = idx / W, x = idx % W;
        out.textureless(y, x) = 1;
        if (propagated[sp.id]) {
          out.disparity.values(y, x) = d_line(y, x) + (x_hat - line_mean[sp.id]);
          out.disparity.valid(y, x) = 1;
        } else if (x_hat != d_before[sp.id]) {
          out.disparity.values(y, x) += x_hat - d_before[sp.id];
        }
      }
    }
    out.updates.push_back(u);
  }
  out.seg = std::move(seg);
  return out;
}

TexturelessResult refine_textureless(const Image& central_view, const SlopeField& field,
                                     const TexturelessConfig& cfg) {
  SlicParams params = cfg.slic;
  if (params.size <= 0) params.size = default_superpixel_size(central_view.height, central_view.width);
  SuperpixelSeg seg = segment_superpixels(central_view, params);
  update_mean_depth(seg, field.disparity.values);
  const Array2D<std::uint8_t> texture = mark_texture_points(field, central_view, cfg);
  return propagate_textureless(std::move(seg), texture, field, cfg);
}

} // namespace lfd
