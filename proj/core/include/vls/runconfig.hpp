// Run configuration: a single JSON document with per-command sections,
// schema-validated before any computation (unknown keys are rejected and
// messages name the offending key and expected type).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vls/geometry.hpp"
#include "vls/protocols.hpp"
#include "vls/spinmix.hpp"
#include "vls/thermobi.hpp"
#include "vls/trapfield.hpp"

namespace vls::io {

struct AtomConfig {
  std::string species = "Rb87";
  int f = 1;
  double g_f = -0.5;
  double wavelength_nm = 1064.0;
  std::string lines_file;       // empty -> built-in table
  double hyperfine_correction = 1.0;
};

struct BeamConfig {
  std::string name;
  double power_w = 0.0;
  double waist_um = 0.0;
  double wavelength_nm = 1064.0;
  Vec3 axis{0, 0, 1};
  Vec3 focus_um{0, 0, 0};
  double pol_theta_rad = 0.0;
  double pol_phi_rad = 0.0;
  double freq_offset_mhz = 0.0;

  trapfield::GaussianBeam to_beam() const;
};

struct MagneticsConfig {
  Vec3 bias_g{0, 0, 0.681};
  double ambient_gradient_g_per_cm = 0.022;
  Vec3 gradient_axis{0, 1, 0};
};

struct RamseySection {
  double interrogation_s = 0.015;
  int shots = 500;
  double contrast_a = 0.8;
  double contrast_b = 0.8;
  std::string noise_distribution = "uniform";
  double noise_rms_rad = 0.0;
  double readout_sigma = 0.02;
  double delta_b_g = 1.5e-5;   // ~1 rad of differential phase at 15 ms
};

struct FitSection {
  bool sampson_refine = true;
  int bootstrap_samples = 64;
};

struct DelayedDropSection {
  std::string beam = "probe";
  double drop_delay_a_s = 2.915e-3;
  double drop_delay_b_s = 0.0;
  double interrogation_s = 250e-6;
  std::vector<double> qwp_angles_deg;   // empty -> uniform 24-angle scan
  double initial_offset_um = 0.0;
  double background_delta_b_g = 8.0e-5;
  double cell_phi_k_rad = 0.0;
  double cell_theta_k_rad = 0.0;
  double qwp_zero_deg = 0.0;
  int anchor_sign = 1;
  int shots = 200;
  std::vector<Vec3> bias_set_g;         // >= 3 entries enable the direction scan
};

struct NullingSection {
  double p_a_w_cm2_per_unit = 8390.0;
  double p_b_w_cm2_per_unit = 6308.27;
  double power_a = 1.0;
  double power_b = 1.33;
  std::vector<double> dp_prime_fracs;   // empty -> 11 points in [-0.25, 0.25]
  std::vector<double> qwp_angles_deg;   // empty -> reference 6-angle schedule
  double interrogation_s = 0.015;
  double theta_null_deg = 337.115;      // places the QWP mount zero
  double cell_phi_k_rad = 0.01;
  double cell_theta_k_rad = 0.5;
  double background_delta_b_g = 1.82e-5;
  double qwp_quantization_mrad = 0.0;
  bool beam_c_enabled = false;
  double beam_c_intensity_w_cm2 = 0.0;
  double beam_c_theta_deg = 0.0;
  int shots = 500;
  int jobs = 1;
};

struct SpinmixSection {
  double q_hz = 10.0;               // used when use_b0_for_q is false
  bool use_b0_for_q = false;
  double b0_g = 0.372;
  double c_hz = -3.2;
  double gradient_mg_per_cm = 4.0;
  double omega_sep_hz = 9.0;
  double damping_zeta = 1.0;
  double r_tf_um = 13.0;
  double t_max_s = 0.4;
  double dt_out_s = 1e-3;

  spinmix::SpinMixParams to_params() const;
};

struct ThermalSection {
  thermobi::WindowMaterial material = thermobi::WindowMaterial::fused_silica();
  thermobi::HeatingScenario scenario{};
  double profile_r_max_um = 400.0;
  int profile_points = 81;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::string polarizability_units = "all";  // si | cgs | au | all
  AtomConfig atom;
  std::vector<BeamConfig> beams;
  MagneticsConfig magnetics;
  RamseySection ramsey;
  FitSection fit;
  DelayedDropSection delayed_drop;
  NullingSection nulling;
  SpinmixSection spinmix;
  ThermalSection thermal;

  // canonical serialization of the effective configuration (after defaults)
  std::string canonical_json() const;
};

// parse + schema-validate; throws ConfigError naming key and expected type
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace vls::io
