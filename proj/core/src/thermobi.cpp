#include "vls/thermobi.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "vls/constants.hpp"
#include "vls/errors.hpp"

namespace vls::thermobi {

namespace k = vls::constants;

void WindowMaterial::validate() const {
  if (!(mu >= 0) || !(k > 0) || !(diffusivity > 0) || !(alpha_cte > 0) ||
      !(young_e > 0) || !(stress_optic_k > 0) || !(n0 >= 1)) {
    throw ConfigError("window material: non-physical parameter");
  }
  if (!(poisson > 0 && poisson < 0.5)) {
    throw ConfigError("window material: Poisson ratio must be in (0, 0.5)");
  }
}

WindowMaterial WindowMaterial::fused_silica() {
  WindowMaterial m;
  m.mu = 0.1;                 // conservative transmission-spec bound
  m.k = 1.31;
  m.diffusivity = 7.5e-7;
  m.alpha_cte = 5e-7;
  m.young_e = 72e9;
  m.poisson = 0.17;
  m.stress_optic_k = 3.4e-12;
  m.p11 = 0.121;
  m.p12 = 0.270;
  m.n0 = 1.45;
  return m;
}

void HeatingScenario::validate() const {
  if (!(p_odt_w > 0) || !(thickness_m > 0) || !(beam_radius_m > 0) ||
      !(exposure_s > 0) || !(wavelength_m > 0)) {
    throw ConfigError("heating scenario: all parameters must be > 0");
  }
}

double absorbed_power_w(const HeatingScenario& scn, const WindowMaterial& mat) {
  return mat.mu * scn.thickness_m * scn.p_odt_w;
}

TempRise temp_rise(const HeatingScenario& scn, const WindowMaterial& mat,
                   double t_s) {
  scn.validate();
  mat.validate();
  TempRise out;
  const double p_abs = absorbed_power_w(scn, mat);
  out.t0_k = p_abs / (4.0 * k::pi * mat.k * scn.thickness_m);
  const double w2 = scn.beam_radius_m * scn.beam_radius_m;
  out.tau_s = w2 / mat.diffusivity;
  out.delta_t_k =
      t_s <= 0 ? 0.0 : out.t0_k * std::log1p(2.0 * mat.diffusivity * t_s / w2);
  const double t_thick = scn.thickness_m * scn.thickness_m / mat.diffusivity;
  out.log_window_ok = (t_s > 3.0 * out.tau_s) && (t_s < t_thick / 3.0);
  return out;
}

double axial_stress_pa(double delta_t_max_k, const WindowMaterial& mat) {
  return 0.5 * mat.alpha_cte * mat.young_e * delta_t_max_k;
}

OpdBound opd_bound(double sigma_pa, const WindowMaterial& mat,
                   double thickness_m, double wavelength_m) {
  OpdBound out;
  out.opd_m = mat.stress_optic_k * thickness_m * sigma_pa;
  out.retardance_rad = k::two_pi * out.opd_m / wavelength_m;
  return out;
}

double optoelastic_q(const WindowMaterial& mat) {
  const double n3 = mat.n0 * mat.n0 * mat.n0;
  return n3 * mat.alpha_cte * (1.0 + mat.poisson) * (mat.p11 - mat.p12) /
         (4.0 * (1.0 - mat.poisson));
}

double retardance_max(const HeatingScenario& scn, const WindowMaterial& mat) {
  const double t0 = temp_rise(scn, mat, scn.exposure_s).t0_k;
  return 4.0 * k::pi * scn.thickness_m * optoelastic_q(mat) * t0 /
         scn.wavelength_m;
}

double retardance_at(const HeatingScenario& scn, const WindowMaterial& mat,
                     double r_m) {
  const double x = 2.0 * r_m * r_m / (scn.beam_radius_m * scn.beam_radius_m);
  // (1 + (exp(-x) - 1)/x) -> 0 as x -> 0
  double shape;
  if (x < 1e-8) {
    shape = 0.5 * x - x * x / 6.0;
  } else {
    shape = 1.0 + std::expm1(-x) / x;
  }
  return retardance_max(scn, mat) * shape;
}

ThermalReport evaluate(const HeatingScenario& scn, const WindowMaterial& mat) {
  ThermalReport r;
  r.p_abs_w = absorbed_power_w(scn, mat);
  const auto tr = temp_rise(scn, mat, scn.exposure_s);
  r.t0_k = tr.t0_k;
  r.tau_s = tr.tau_s;
  r.delta_t_k = tr.delta_t_k;
  r.log_window_ok = tr.log_window_ok;
  r.sigma_pa = axial_stress_pa(tr.delta_t_k, mat);
  const auto ob = opd_bound(r.sigma_pa, mat, scn.thickness_m, scn.wavelength_m);
  r.opd_m = ob.opd_m;
  r.retardance_bound_rad = ob.retardance_rad;
  r.q_per_k = optoelastic_q(mat);
  r.theta_max_rad = retardance_max(scn, mat);
  r.theta_at_w_over_max =
      retardance_at(scn, mat, scn.beam_radius_m) / r.theta_max_rad;
  r.peak_circularity = std::sin(2.0 * r.theta_max_rad);
  return r;
}

std::string report_to_json(const ThermalReport& r) {
  std::ostringstream os;
  char buf[1024];
  std::snprintf(
      buf, sizeof(buf),
      "{\n"
      "  \"p_abs_w\": %.17g,\n"
      "  \"t0_k\": %.17g,\n"
      "  \"tau_s\": %.17g,\n"
      "  \"delta_t_k\": %.17g,\n"
      "  \"sigma_pa\": %.17g,\n"
      "  \"opd_m\": %.17g,\n"
      "  \"retardance_bound_rad\": %.17g,\n"
      "  \"q_per_k\": %.17g,\n"
      "  \"theta_max_rad\": %.17g,\n"
      "  \"theta_at_w_over_max\": %.17g,\n"
      "  \"peak_circularity\": %.17g,\n"
      "  \"log_window_ok\": %s\n"
      "}\n",
      r.p_abs_w, r.t0_k, r.tau_s, r.delta_t_k, r.sigma_pa, r.opd_m,
      r.retardance_bound_rad, r.q_per_k, r.theta_max_rad,
      r.theta_at_w_over_max, r.peak_circularity,
      r.log_window_ok ? "true" : "false");
  os << buf;
  return os.str();
}

void write_profile_csv(std::ostream& out, const HeatingScenario& scn,
                       const WindowMaterial& mat, double r_max_m, int points) {
  out << "r_m,retardance_rad\n";
  char buf[128];
  for (int i = 0; i < points; ++i) {
    const double r = r_max_m * i / (points - 1);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", r,
                  retardance_at(scn, mat, r));
    out << buf;
  }
}

}  // namespace vls::thermobi
