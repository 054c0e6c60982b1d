#pragma once

#include <cstdint>

#include "lfd/slope_field.hpp"

namespace lfd {

struct ConfidenceParams {
  double tau0 = 1000.0;
  double tau1 = 0.2;
  double c_tl = 0.8;            // textureless confidence rectification
  double c_occ_floor = 0.5;
  double min_weight = 1e-6;     // keeps the data term definite where exp() underflows
};

/// c_occ = max(floor, 1 - share of views the half-SEPI dropped).
Array2D<double> occlusion_confidence(const Array2D<Occlusion>& category, int n_t, int n_s, double floor);

/// Population std of the 3x3 window (clamped borders).
Array2D<double> local_std(const Array2D<double>& d);

/// w = c * c_occ * c_tl where the local std is below tau1, else
/// exp(-tau0 * (std - tau1)). Invalid pixels get min_weight.
Array2D<double> update_confidence(const SlopeField& field, int n_t, int n_s,
                                  const Array2D<std::uint8_t>& textureless, const ConfidenceParams& p = {});

enum class OffTexturelessCtl {
  One,       // c_tl = 1 away from textureless regions
  Rectified, // c_tl = 0.8 everywhere
};

struct SmoothnessParams {
  double tau2 = 1.5;
  double c_tl = 0.8;
  double gradient_floor = 1e-3;
  OffTexturelessCtl off_textureless = OffTexturelessCtl::One;
};

struct SmoothnessField {
  Array2D<double> s_c, s_tl, s; // s = s_c * s_tl
};

SmoothnessField build_smoothness(const Image& central_view, const Array2D<std::uint8_t>& textureless,
                                 const SmoothnessParams& p = {});

enum class CouplingMode {
  Sum,           // alpha * (s_p + s_q) per edge: exact minimizer of the energy as written
  GeometricMean, // alpha * sqrt(s_p * s_q) per edge
  Literal,       // per-pixel rows with s at the row's centre, solved through normal equations
};

struct GlobalParams {
  double alpha = 0.05;
  CouplingMode mode = CouplingMode::Sum;
  double tolerance = 1e-10; // relative residual
  int max_iterations = 20000;
};

/// sum_p w_p (d'_p - d_p)^2 + alpha * sum_p s_p sum_{q in N4(p)} (d'_p - d'_q)^2
double global_energy(const Array2D<double>& d, const Array2D<double>& d_prime, const Array2D<double>& w,
                     const Array2D<double>& s, double alpha);

struct GlobalSolve {
  Array2D<double> disparity;
  int iterations = 0;
  double residual = 0.0;
};

/// Weighted least-squares regularization (preconditioned conjugate gradient).
/// alpha == 0 returns d unchanged. Throws SolverNotConverged with the residual.
GlobalSolve solve_global(const Array2D<double>& d, const Array2D<double>& w, const Array2D<double>& s,
                         const GlobalParams& params = {});

} // namespace lfd
