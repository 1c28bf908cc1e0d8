// Small weighted least-squares helpers shared by the measurement pipelines.
#pragma once

#include <span>

namespace vls::fitting {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double u_slope = 0.0;
  double u_intercept = 0.0;
  double cov_si = 0.0;   // cov(slope, intercept)
  double chi2 = 0.0;
  int dof = 0;
};

// y = intercept + slope x with per-point uncertainties u (1-sigma).
// Falls back to unweighted (with residual-based uncertainties) when the
// uncertainties are degenerate (non-finite or non-positive).
LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> u);

struct Sin2Fit {
  double amplitude = 0.0;   // A in A sin 2(theta - theta0) + offset
  double theta0 = 0.0;
  double offset = 0.0;
  double u_amplitude = 0.0;
  double u_theta0 = 0.0;
  double chi2 = 0.0;
  int dof = 0;
};

// linear in (sin 2 theta, cos 2 theta, 1); angles in rad
Sin2Fit fit_sin2(std::span<const double> theta, std::span<const double> y,
                 std::span<const double> u);

}  // namespace vls::fitting
