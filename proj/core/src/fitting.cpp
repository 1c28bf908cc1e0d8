#include "vls/fitting.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "vls/errors.hpp"

namespace vls::fitting {

namespace {

bool weights_usable(std::span<const double> u) {
  if (u.empty()) return false;
  for (double v : u) {
    if (!(v > 0.0) || !std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> u) {
  const int n = static_cast<int>(x.size());
  if (n < 2 || y.size() != x.size()) {
    throw std::invalid_argument("fit_line: need >= 2 points");
  }
  const bool weighted = weights_usable(u) && u.size() == x.size();

  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double w = weighted ? 1.0 / (u[i] * u[i]) : 1.0;
    sw += w; sx += w * x[i]; sy += w * y[i];
    sxx += w * x[i] * x[i]; sxy += w * x[i] * y[i];
  }
  const double det = sw * sxx - sx * sx;
  if (det <= 0.0 || !std::isfinite(det)) {
    throw NumericalError("fit_line: degenerate abscissas");
  }
  LineFit out;
  out.slope = (sw * sxy - sx * sy) / det;
  out.intercept = (sxx * sy - sx * sxy) / det;
  out.dof = n - 2;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - out.intercept - out.slope * x[i];
    const double w = weighted ? 1.0 / (u[i] * u[i]) : 1.0;
    out.chi2 += w * r * r;
  }
  double var_scale = 1.0;
  if (!weighted) {
    // residual variance estimate
    var_scale = out.dof > 0 ? out.chi2 / out.dof : 0.0;
  }
  out.u_slope = std::sqrt(var_scale * sw / det);
  out.u_intercept = std::sqrt(var_scale * sxx / det);
  out.cov_si = -var_scale * sx / det;
  return out;
}

Sin2Fit fit_sin2(std::span<const double> theta, std::span<const double> y,
                 std::span<const double> u) {
  const int n = static_cast<int>(theta.size());
  if (n < 3 || y.size() != theta.size()) {
    throw std::invalid_argument("fit_sin2: need >= 3 points");
  }
  const bool weighted = weights_usable(u) && u.size() == theta.size();

  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (int i = 0; i < n; ++i) {
    const double w = weighted ? 1.0 / (u[i] * u[i]) : 1.0;
    const Eigen::Vector3d g(std::sin(2.0 * theta[i]), std::cos(2.0 * theta[i]), 1.0);
    m += w * g * g.transpose();
    rhs += w * y[i] * g;
  }
  // minimum-norm least squares; the schedule may leave a basis function
  // unconstrained (e.g. angles where sin 2 theta vanishes identically)
  Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix3d> cod(m);
  const Eigen::Vector3d p = cod.solve(rhs);
  const double a = p(0), b = p(1);

  Sin2Fit out;
  out.amplitude = std::hypot(a, b);
  // A sin 2(t - t0) = A cos(2 t0) sin 2t - A sin(2 t0) cos 2t
  out.theta0 = 0.5 * std::atan2(-b, a);
  out.offset = p(2);
  out.dof = n - 3;
  for (int i = 0; i < n; ++i) {
    const double w = weighted ? 1.0 / (u[i] * u[i]) : 1.0;
    const double r = y[i] - (a * std::sin(2 * theta[i]) + b * std::cos(2 * theta[i]) + p(2));
    out.chi2 += w * r * r;
  }
  double var_scale = weighted ? 1.0 : (out.dof > 0 ? out.chi2 / out.dof : 0.0);
  const Eigen::Matrix3d cov = cod.pseudoInverse() * var_scale;
  // propagate to amplitude and theta0
  if (out.amplitude > 0) {
    const Eigen::Vector2d ga(a / out.amplitude, b / out.amplitude);
    const Eigen::Matrix2d cab = cov.topLeftCorner<2, 2>();
    out.u_amplitude = std::sqrt(ga.dot(cab * ga));
    const double a2 = out.amplitude * out.amplitude;
    const Eigen::Vector2d gt(0.5 * b / a2, -0.5 * a / a2);
    out.u_theta0 = std::sqrt(gt.dot(cab * gt));
  }
  return out;
}

}  // namespace vls::fitting
