#include "lfd/global_opt.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lfd/error.hpp"
#include "lfd/image_ops.hpp"
#include "lfd/occlusion.hpp"

namespace lfd {

Array2D<double> occlusion_confidence(const Array2D<Occlusion>& category, int n_t, int n_s, double floor) {
  Array2D<double> out(category.height(), category.width(), 1.0);
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x)
      out(y, x) = std::max(floor, 1.0 - discarded_view_fraction(n_t, n_s, category(y, x)));
  return out;
}

Array2D<double> local_std(const Array2D<double>& d) {
  const int H = d.height(), W = d.width();
  Array2D<double> out(H, W, 0.0);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      double sum = 0.0, sq = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const double v = d(std::clamp(y + dy, 0, H - 1), std::clamp(x + dx, 0, W - 1));
          sum += v;
          sq += v * v;
        }
      }
      const double mean = sum / 9.0;
      out(y, x) = std::sqrt(std::max(0.0, sq / 9.0 - mean * mean));
    }
  }
  return out;
}

Array2D<double> update_confidence(const SlopeField& field, int n_t, int n_s,
                                  const Array2D<std::uint8_t>& textureless, const ConfidenceParams& p) {
  const int H = field.height(), W = field.width();
  const bool has_tl = textureless.height() == H && textureless.width() == W;
  const Array2D<double> c_occ = occlusion_confidence(field.occlusion, n_t, n_s, p.c_occ_floor);
  const Array2D<double> sd = local_std(field.disparity.values);
  Array2D<double> w(H, W, p.min_weight);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      if (!field.disparity.valid(y, x)) continue;
      const double c_tl = has_tl && textureless(y, x) ? p.c_tl : 1.0;
      const double v = sd(y, x) < p.tau1 ? field.confidence(y, x) * c_occ(y, x) * c_tl
                                         : std::exp(-p.tau0 * (sd(y, x) - p.tau1));
      w(y, x) = std::max(v, p.min_weight);
    }
  }
  return w;
}

SmoothnessField build_smoothness(const Image& central_view, const Array2D<std::uint8_t>& textureless,
                                 const SmoothnessParams& p) {
  const Gradient g = sobel(to_gray(central_view));
  const int H = central_view.height, W = central_view.width;
  const bool has_tl = textureless.height() == H && textureless.width() == W;
  SmoothnessField out{Array2D<double>(H, W), Array2D<double>(H, W), Array2D<double>(H, W)};
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      out.s_c(y, x) = 1.0 / std::max(g.magnitude(y, x), p.gradient_floor);
      const bool tl = has_tl && textureless(y, x);
      const double c_tl = tl || p.off_textureless == OffTexturelessCtl::Rectified ? p.c_tl : 1.0;
      out.s_tl(y, x) = std::exp(p.tau2 * c_tl);
      out.s(y, x) = out.s_c(y, x) * out.s_tl(y, x);
    }
  }
  return out;
}

double global_energy(const Array2D<double>& d, const Array2D<double>& d_prime, const Array2D<double>& w,
                     const Array2D<double>& s, double alpha) {
  const int H = d.height(), W = d.width();
  double data = 0.0, smooth = 0.0;
  constexpr int dx[4] = {-1, 1, 0, 0}, dy[4] = {0, 0, -1, 1};
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const double r = d_prime(y, x) - d(y, x);
      data += w(y, x) * r * r;
      double local = 0.0;
      for (int k = 0; k < 4; ++k) {
        const int nx = x + dx[k], ny = y + dy[k];
        if (nx < 0 || nx >= W || ny < 0 || ny >= H) continue;
        const double g = d_prime(y, x) - d_prime(ny, nx);
        local += g * g;
      }
      smooth += s(y, x) * local;
    }
  }
  return data + alpha * smooth;
}

namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Literal per-pixel equations: (w_p + alpha s_p deg_p) x_p - alpha s_p sum x_q = w_p d_p.
SpMat literal_rows(const Array2D<double>& w, const Array2D<double>& s, double alpha) {
  const int H = w.height(), W = w.width();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(H) * W * 5);
  constexpr int dx[4] = {-1, 1, 0, 0}, dy[4] = {0, 0, -1, 1};
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const int p = y * W + x;
      double diag = w(y, x);
      for (int k = 0; k < 4; ++k) {
        const int nx = x + dx[k], ny = y + dy[k];
        if (nx < 0 || nx >= W || ny < 0 || ny >= H) continue;
        diag += alpha * s(y, x);
        trip.emplace_back(p, ny * W + nx, -alpha * s(y, x));
      }
      trip.emplace_back(p, p, diag);
    }
  }
  SpMat A(H * W, H * W);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

SpMat symmetric_system(const Array2D<double>& w, const Array2D<double>& s, double alpha, CouplingMode mode) {
  const int H = w.height(), W = w.width();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(H) * W * 5);
  std::vector<double> diag(static_cast<std::size_t>(H) * W);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) diag[y * W + x] = w(y, x);
  auto edge = [&](int y0, int x0, int y1, int x1) {
    const double e = mode == CouplingMode::Sum ? alpha * (s(y0, x0) + s(y1, x1))
                                               : alpha * std::sqrt(s(y0, x0) * s(y1, x1));
    const int p = y0 * W + x0, q = y1 * W + x1;
    diag[p] += e;
    diag[q] += e;
    trip.emplace_back(p, q, -e);
    trip.emplace_back(q, p, -e);
  };
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      if (x + 1 < W) edge(y, x, y, x + 1);
      if (y + 1 < H) edge(y, x, y + 1, x);
    }
  }
  for (int p = 0; p < H * W; ++p) trip.emplace_back(p, p, diag[p]);
  SpMat A(H * W, H * W);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

} // namespace

GlobalSolve solve_global(const Array2D<double>& d, const Array2D<double>& w, const Array2D<double>& s,
                         const GlobalParams& params) {
  if (!w.same_shape(d) || !s.same_shape(d)) fail(Errc::DimensionMismatch, "d, w and s must share a shape");
  if (!(params.alpha >= 0.0)) fail(Errc::BadConfig, "alpha must be non-negative");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d.data()[i]) || !std::isfinite(w.data()[i]) || !std::isfinite(s.data()[i]))
      fail(Errc::PreconditionViolated, "non-finite input to the global solve");
    if (!(w.data()[i] > 0.0) || !(s.data()[i] > 0.0))
      fail(Errc::PreconditionViolated, "weights and smoothness must be positive");
  }
  GlobalSolve out;
  out.disparity = d;
  if (params.alpha == 0.0 || d.size() == 0) return out;

  const int n = static_cast<int>(d.size());
  Eigen::Map<const Eigen::VectorXd> dv(d.data().data(), n), wv(w.data().data(), n);
  const Eigen::VectorXd wd = wv.cwiseProduct(dv);

  SpMat A;
  Eigen::VectorXd b;
  if (params.mode == CouplingMode::Literal) {
    const SpMat R = literal_rows(w, s, params.alpha);
    const SpMat Rt = R.transpose();
    A = Rt * R;
    b = Rt * wd;
  } else {
    A = symmetric_system(w, s, params.alpha, params.mode);
    b = wd;
  }

  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
  cg.setTolerance(params.tolerance);
  cg.setMaxIterations(params.max_iterations);
  cg.compute(A);
  const Eigen::VectorXd x = cg.solveWithGuess(b, dv);
  out.iterations = static_cast<int>(cg.iterations());
  out.residual = cg.error();
  if (cg.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "conjugate gradient stopped after " << out.iterations << " iterations, relative residual "
        << out.residual;
    fail(Errc::SolverNotConverged, msg.str());
  }
  std::copy(x.data(), x.data() + n, out.disparity.data().begin());
  return out;
}

} // namespace lfd
