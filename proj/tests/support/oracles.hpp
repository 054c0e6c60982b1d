#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lfd/global_opt.hpp"
#include "lfd/light_field.hpp"

// Reference computations written independently of the library code paths.
namespace oracle {

/// Exact slope extent of all lines y = k x + b, b in [0, 1), whose pixel
/// string (node i = floor(k(i+1)+b) - floor(k i+b)) equals `nodes`. Derived
/// from the pairwise digital-segment constraints in rational arithmetic.
struct ExactInterval {
  long long lo_num = 0, lo_den = 1; // supremum of the lower bounds
  long long hi_num = 0, hi_den = 1; // infimum of the upper bounds
  double width() const { return static_cast<double>(hi_num) / hi_den - static_cast<double>(lo_num) / lo_den; }
};
ExactInterval exact_slope_interval(const std::vector<int>& nodes);

/// 2-D bilinear lookup in view (t, s); false outside the pixel grid.
bool bilinear(const lfd::LightField4D& lf, int t, int s, double x, double y, double* out);

struct Reprojection {
  double cost = 0.0;
  int samples = 0;
};

/// Mean over views in [t0..t1] x [s0..s1] of sum_c (L(view, x0 + d ds, y0 + d dt) - p)^2.
Reprojection reprojection_cost(const lfd::LightField4D& lf, int x0, int y0, double d, int t_begin, int t_end,
                               int s_begin, int s_end);

/// The global energy, written out term by term.
double energy(const Eigen::VectorXd& d, const Eigen::VectorXd& x, const Eigen::VectorXd& w,
              const Eigen::VectorXd& s, int height, int width, double alpha);

/// Dense minimizer of `energy` from its Hessian, assembled by second
/// differences of the energy itself and solved with LDLT.
Eigen::VectorXd minimize_energy(const Eigen::VectorXd& d, const Eigen::VectorXd& w, const Eigen::VectorXd& s,
                                int height, int width, double alpha);

/// Dense solve of the coupled system for an explicit coupling rule.
Eigen::VectorXd solve_coupling(const Eigen::VectorXd& d, const Eigen::VectorXd& w, const Eigen::VectorXd& s,
                               int height, int width, double alpha, lfd::CouplingMode mode);

} // namespace oracle
