// Reference closed-loop scenarios shared by the protocol tests and the
// acceptance suite. Beam powers are derived in closed form from the target
// observables, so the pipelines are checked against independent arithmetic
// rather than against themselves.
#pragma once

#include <cmath>

#include "vls/atomprops.hpp"
#include "vls/constants.hpp"
#include "vls/polopt.hpp"
#include "vls/protocols.hpp"

namespace scenario {

namespace k = vls::constants;

inline double omega_1064() { return k::two_pi * k::speed_of_light / 1064e-9; }

inline double alpha_v_theory() {
  return vls::atomprops::alpha_v_nJF(
             vls::atomprops::alpha1_nJ(vls::atomprops::rb87_d_lines(),
                                       vls::atomprops::HalfInt(1), omega_1064()),
             vls::atomprops::rb87_f1_level())
      .value_si;
}

inline double alpha_scalar_theory() {
  return vls::atomprops::alpha_scalar_nJ(vls::atomprops::rb87_d_lines(),
                                         vls::atomprops::HalfInt(1), omega_1064())
      .value_si;
}

// fictitious field per intensity at full circularity, G per (W/cm^2)
inline double field_per_intensity_g_cm2(double alpha_v) {
  return alpha_v / (4.0 * k::speed_of_light * k::epsilon0 * k::bohr_magneton *
                    0.5 * 1.0) *
         k::gauss_per_tesla * k::w_cm2_to_w_m2;
}

// Probe-beam power that makes the peak delayed-drop gradient equal
// `gradient_g_per_cm` for two clouds separated by dy below the axis.
inline double probe_power_for_gradient(double gradient_g_per_cm, double waist_m,
                                       double dy_m, double y_b_offset_m,
                                       double alpha_v) {
  const double db_target = gradient_g_per_cm * (dy_m * 100.0);  // gauss
  const double di_target = db_target / field_per_intensity_g_cm2(alpha_v);
  const double w2 = waist_m * waist_m;
  const double y_a = y_b_offset_m + dy_m;
  const double frac = std::exp(-2.0 * y_b_offset_m * y_b_offset_m / w2) -
                      std::exp(-2.0 * y_a * y_a / w2);
  const double peak_w_cm2 = di_target / frac;
  return peak_w_cm2 * k::w_cm2_to_w_m2 * k::pi * w2 / 2.0;
}

// delayed-drop reference: the z'-geometry scan, ideal cell (phi_k = 0)
inline vls::protocols::DelayedDropPlan delayed_drop_plan(
    double gradient_g_per_cm, double waist_m, double alpha_v, int n_angles = 24) {
  vls::protocols::DelayedDropPlan plan;
  plan.drop_delay_a_s = std::sqrt(2.0 * 41.7e-6 / k::standard_gravity);
  plan.drop_delay_b_s = 0.0;
  plan.interrogation_s = 250e-6;
  plan.probe_beam.waist_m = waist_m;
  plan.probe_beam.wavelength_m = 1064e-9;
  plan.probe_beam.direction = {0, 0, 1};
  plan.probe_beam.power_w = probe_power_for_gradient(
      gradient_g_per_cm, waist_m, 41.7e-6, 0.0, alpha_v);
  plan.anchor_sign = +1;
  plan.qwp_angles_rad.resize(n_angles);
  for (int i = 0; i < n_angles; ++i) {
    plan.qwp_angles_rad[i] = k::two_pi * i / n_angles;
  }
  return plan;
}

inline vls::protocols::PhysicsConfig delayed_drop_physics(std::uint64_t seed) {
  vls::protocols::PhysicsConfig phys;
  phys.alpha_v_si = alpha_v_theory();
  phys.cell_phi_k = 0.0;
  phys.cell_theta_k = 0.0;
  phys.qwp_zero_rad = 0.0;
  phys.bias_g = {0, 0, 0.5};          // along the probe beam: cos nu = 1
  phys.background_delta_b_g = 8.0e-5; // ~20 mG/cm ambient over the separation
  phys.shots = 200;
  phys.readout_sigma = 0.02;
  phys.seed = seed;
  return phys;
}

inline constexpr double deg = k::pi / 180.0;

// in-trap nulling reference scenario (T = 15 ms, I0 = 8.39e3 W/cm^2,
// theta_N = 337.115 deg, six angles over 10 arcmin)
inline vls::protocols::InTrapPlan nulling_plan() {
  vls::protocols::InTrapPlan plan;
  plan.p_a = 8390.0;   // W/cm^2 per rf unit
  plan.p_b = 8390.0;
  plan.power_a = 1.0;
  plan.power_b = 1.0;
  plan.interrogation_s = 0.015;
  for (int i = 0; i < 11; ++i) {
    plan.dp_prime_fracs.push_back(-0.25 + 0.05 * i);
  }
  // six angles spanning 10 arcmin; the approach nearest the nulling angle
  // is 0.0060161 deg, i.e. a residual 2|dtheta| of 2.1e-4 rad
  const double nearest = (337.115 + 0.0060161) * deg;
  const double spacing = (10.0 / 60.0 / 5.0) * deg;  // 2 arcmin
  for (int j = -2; j <= 3; ++j) {
    plan.qwp_angles_rad.push_back(nearest + j * spacing);
  }
  plan.beam_c_direction = {1, 0, 0};
  return plan;
}

inline vls::protocols::PhysicsConfig nulling_physics(std::uint64_t seed) {
  vls::protocols::PhysicsConfig phys;
  phys.alpha_v_si = alpha_v_theory();
  phys.cell_phi_k = 0.01;
  phys.cell_theta_k = 0.5;
  const double theta_n_local = vls::polopt::nulling_angle(0.01, 0.5);
  phys.qwp_zero_rad = 337.115 * deg - theta_n_local;
  phys.bias_g = {0, 0, 0.681};  // along the split beams; 15 ms contrast max
  phys.background_delta_b_g = 1.82e-5;
  phys.shots = 500;
  phys.readout_sigma = 0.02;
  phys.seed = seed;
  return phys;
}

}  // namespace scenario
