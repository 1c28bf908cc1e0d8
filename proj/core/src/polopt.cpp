#include "vls/polopt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vls/constants.hpp"
#include "vls/errors.hpp"

namespace vls::polopt {

namespace k = vls::constants;
using std::complex;

double PolarizationState::ellipticity_theta() const {
  double c = circularity() / norm2();
  c = std::clamp(c, -1.0, 1.0);
  return 0.5 * std::asin(c);
}

double PolarizationState::orientation_phi() const {
  const double s1 = std::norm(ex) - std::norm(ey);
  const double s2 = 2.0 * std::real(std::conj(ex) * ey);
  double phi = 0.5 * std::atan2(s2, s1);
  if (phi < 0) phi += k::pi;
  return phi;
}

Retarder Retarder::quarter_wave(double axis) {
  return {0.5 * k::pi, axis, RetarderKind::qwp};
}
Retarder Retarder::half_wave(double axis) {
  return {k::pi, axis, RetarderKind::hwp};
}
Retarder Retarder::window(double retardance, double axis) {
  return {retardance, axis, RetarderKind::window};
}

PolarizationState state_from_theta_phi(double theta, double phi) {
  const double a = std::sin(theta + 0.25 * k::pi);
  const double b = std::cos(theta + 0.25 * k::pi);
  const complex<double> e2ip = std::polar(1.0, 2.0 * phi);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // eL = (x + iy)/sqrt2, eR = (x - iy)/sqrt2
  PolarizationState s;
  s.ex = (a + e2ip * b) * inv_sqrt2;
  s.ey = complex<double>(0, 1) * (a - e2ip * b) * inv_sqrt2;
  return s;
}

PolarizationState apply_retarder(const PolarizationState& s, const Retarder& r) {
  const double c = std::cos(r.axis), sn = std::sin(r.axis);
  const complex<double> e = std::polar(1.0, r.retardance);
  // R(a) diag(1, e^{i delta}) R(-a)
  const complex<double> j00 = c * c + sn * sn * e;
  const complex<double> j01 = c * sn * (1.0 - e);
  const complex<double> j11 = sn * sn + c * c * e;
  return {j00 * s.ex + j01 * s.ey, j01 * s.ex + j11 * s.ey};
}

double circularity_after_cell(double theta, double phi_k, double theta_k) {
  return std::cos(phi_k) * std::sin(2.0 * theta) +
         std::sin(phi_k) * std::cos(2.0 * theta) * std::sin(2.0 * (theta - theta_k));
}

double nulling_angle(double phi_k, double theta_k) {
  if (std::abs(phi_k) >= 0.5 * k::pi) {
    throw std::invalid_argument("nulling_angle requires |phi_k| < pi/2");
  }
  auto f = [&](double th) { return circularity_after_cell(th, phi_k, theta_k); };
  double lo = -0.25 * k::pi, hi = 0.25 * k::pi;
  double flo = f(lo);
  if (flo == 0.0) return lo;
  if (f(hi) == 0.0) return hi;
  if (flo * f(hi) > 0.0) {
    // cannot occur for |phi_k| < pi/2 since C(+-pi/4) = +-cos(phi_k)
    throw NumericalError("nulling_angle: no sign change on bracket");
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) { lo = hi = mid; break; }
    if (flo * fm < 0.0) hi = mid;
    else { lo = mid; flo = fm; }
  }
  double th = 0.5 * (lo + hi);
  // one Newton polish
  const double h = 1e-7;
  const double df = (f(th + h) - f(th - h)) / (2.0 * h);
  if (df != 0.0) th -= f(th) / df;
  return th;
}

Vec3 fictitious_field(double intensity_w_m2, double circularity,
                      const Vec3& k_hat, double alpha_v_si, double g_f, double f) {
  if (g_f == 0.0 || f == 0.0) {
    throw std::invalid_argument("fictitious_field: g_f and F must be nonzero");
  }
  // B = -(I / 2 c eps0) * alpha_v / (2 mu_B g_F F) * C k_hat
  const double tesla = -intensity_w_m2 * alpha_v_si * circularity /
                       (4.0 * k::speed_of_light * k::epsilon0 *
                        k::bohr_magneton * g_f * f);
  return k_hat * (tesla * k::gauss_per_tesla);
}

Vec3 fictitious_field(double intensity_w_m2, const PolarizationState& s,
                      const Vec3& k_hat, double alpha_v_si, double g_f, double f) {
  return fictitious_field(intensity_w_m2, s.circularity() / s.norm2(), k_hat,
                          alpha_v_si, g_f, f);
}

}  // namespace vls::polopt
