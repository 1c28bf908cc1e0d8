// Thermal-stress birefringence estimate for a window heated by the dipole
// beam: absorbed power -> on-axis temperature rise -> principal stresses ->
// optical path difference bound -> retardance profile and induced
// circularity.
#pragma once

#include <ostream>
#include <string>

namespace vls::thermobi {

struct WindowMaterial {
  double mu = 0.0;          // absorption coefficient, 1/m
  double k = 0.0;           // thermal conductivity, W/m/K
  double diffusivity = 0.0; // m^2/s
  double alpha_cte = 0.0;   // thermal expansion, 1/K
  double young_e = 0.0;     // Pa
  double poisson = 0.0;     // in (0, 0.5)
  double stress_optic_k = 0.0;  // 1/Pa
  double p11 = 0.0, p12 = 0.0;  // photoelastic components
  double n0 = 1.0;          // cold refractive index

  void validate() const;
  // fused silica, with the conservative transmission-spec absorption bound
  static WindowMaterial fused_silica();
  // measured volume attenuation for fused silica (much smaller than the bound)
  static constexpr double fused_silica_measured_mu = 0.0018;  // 1/m
};

struct HeatingScenario {
  double p_odt_w = 10.0;
  double thickness_m = 5e-3;
  double beam_radius_m = 145e-6;  // mean radius through the window
  double exposure_s = 10.0;
  double wavelength_m = 1064e-9;

  void validate() const;
};

double absorbed_power_w(const HeatingScenario& scn, const WindowMaterial& mat);

struct TempRise {
  double delta_t_k = 0.0;   // on-axis rise at time t
  double t0_k = 0.0;        // characteristic temperature P_abs/(4 pi k d)
  double tau_s = 0.0;       // w^2 / D
  bool log_window_ok = true;  // tau << t << d^2/D (factor-3 margins)
};
TempRise temp_rise(const HeatingScenario& scn, const WindowMaterial& mat,
                   double t_s);

// on-axis principal stresses sigma_rr(0) = sigma_tt(0) = alpha E dT / 2
double axial_stress_pa(double delta_t_max_k, const WindowMaterial& mat);

struct OpdBound {
  double opd_m = 0.0;
  double retardance_rad = 0.0;  // 2 pi OPD / lambda
};
OpdBound opd_bound(double sigma_pa, const WindowMaterial& mat,
                   double thickness_m, double wavelength_m);

// effective optoelastic coefficient Q = n0^3 a_CTE (1+nu)(p11-p12)/(4(1-nu))
double optoelastic_q(const WindowMaterial& mat);

// long-time retardance profile; theta(0) = 0, |theta| -> theta_max off axis
double retardance_at(const HeatingScenario& scn, const WindowMaterial& mat,
                     double r_m);
double retardance_max(const HeatingScenario& scn, const WindowMaterial& mat);

struct ThermalReport {
  double p_abs_w = 0.0;
  double t0_k = 0.0;
  double tau_s = 0.0;
  double delta_t_k = 0.0;
  double sigma_pa = 0.0;
  double opd_m = 0.0;
  double retardance_bound_rad = 0.0;
  double q_per_k = 0.0;
  double theta_max_rad = 0.0;          // direct evaluation of the profile limit
  double theta_at_w_over_max = 0.0;    // theta(w)/theta_max
  double peak_circularity = 0.0;       // sin 2 theta_max
  bool log_window_ok = true;
};
ThermalReport evaluate(const HeatingScenario& scn, const WindowMaterial& mat);
std::string report_to_json(const ThermalReport& r);
void write_profile_csv(std::ostream& out, const HeatingScenario& scn,
                       const WindowMaterial& mat, double r_max_m, int points);

}  // namespace vls::thermobi
