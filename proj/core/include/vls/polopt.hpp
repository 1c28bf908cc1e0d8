// Jones-calculus polarization states and retarders, circularity through a
// birefringent cell, nulling-angle root finding, and the fictitious field.
//
// Conventions, fixed once and used everywhere:
//  - transverse basis (x, y), beam along +z; Jones vector (Ex, Ey)
//  - circular unit vectors eL = (x + iy)/sqrt2, eR = (x - iy)/sqrt2
//  - circularity C = |eL* . e|^2 - |eR* . e|^2 = 2 Im(Ex* Ey);
//    theta = +pi/4 gives C = +1 (left-circular)
//  - retarder fast-axis angles are measured from the x axis; the slow
//    axis acquires phase e^{+i delta}
#pragma once

#include <complex>

#include "vls/geometry.hpp"

namespace vls::polopt {

struct PolarizationState {
  std::complex<double> ex{1.0, 0.0};
  std::complex<double> ey{0.0, 0.0};

  double circularity() const { return 2.0 * std::imag(std::conj(ex) * ey); }
  double ellipticity_theta() const;   // theta with C = sin 2 theta
  double orientation_phi() const;     // polarization axis, mod pi, from x
  double norm2() const { return std::norm(ex) + std::norm(ey); }

  static PolarizationState horizontal() { return {{1, 0}, {0, 0}}; }
  static PolarizationState vertical() { return {{0, 0}, {1, 0}}; }
};

enum class RetarderKind { qwp, hwp, window };

struct Retarder {
  double retardance = 0.0;  // rad
  double axis = 0.0;        // fast-axis angle from x, rad
  RetarderKind kind = RetarderKind::window;

  static Retarder quarter_wave(double axis);
  static Retarder half_wave(double axis);
  static Retarder window(double retardance, double axis);
};

// the elliptical state of fixed ellipticity theta and orientation phi
PolarizationState state_from_theta_phi(double theta, double phi);

// unitary retarder action; norm preserved
PolarizationState apply_retarder(const PolarizationState& s, const Retarder& r);

// Circularity after a QWP at angle theta followed by a composite cell
// retarder (phase phi_k, fast axis theta_k referenced to the input
// polarization axis), for linearly polarized input:
//   C = cos(phi_k) sin(2 theta) + sin(phi_k) cos(2 theta) sin(2(theta - theta_k))
// Exact for ideal elements under the conventions above.
double circularity_after_cell(double theta, double phi_k, double theta_k);

// Root of circularity_after_cell in theta nearest 0, |phi_k| < pi/2
// required. Bisection on [-pi/4, pi/4], Newton-polished to 1e-10 rad.
double nulling_angle(double phi_k, double theta_k);

// Fictitious magnetic field of a plane wave of intensity I (W/m^2) and
// polarization s propagating along k_hat, in gauss. alpha_v in SI
// (C m^2/V). The result is (anti)parallel to k_hat.
Vec3 fictitious_field(double intensity_w_m2, const PolarizationState& s,
                      const Vec3& k_hat, double alpha_v_si, double g_f, double f);
Vec3 fictitious_field(double intensity_w_m2, double circularity,
                      const Vec3& k_hat, double alpha_v_si, double g_f, double f);

}  // namespace vls::polopt
