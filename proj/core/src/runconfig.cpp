#include "vls/runconfig.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vls/constants.hpp"
#include "vls/errors.hpp"
#include "vls/polopt.hpp"

namespace vls::io {

namespace k = vls::constants;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad_key(const std::string& path, const std::string& why) {
  throw ConfigError("config: " + path + " " + why);
}

class Section {
 public:
  Section(const ordered_json& j, std::string path)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) bad_key(path_, "expects an object");
  }
  ~Section() = default;

  // call after reading all known keys
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        bad_key(path_ + "." + it.key(), "is an unknown key");
      }
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  double number(const std::string& key, double dflt) {
    if (!has(key)) return dflt;
    if (!j_[key].is_number()) bad_key(path_ + "." + key, "expects a number");
    return j_[key].get<double>();
  }

  int integer(const std::string& key, int dflt) {
    if (!has(key)) return dflt;
    if (!j_[key].is_number_integer()) bad_key(path_ + "." + key, "expects an integer");
    return j_[key].get<int>();
  }

  std::uint64_t uint64(const std::string& key, std::uint64_t dflt) {
    if (!has(key)) return dflt;
    if (!j_[key].is_number_unsigned() && !j_[key].is_number_integer()) {
      bad_key(path_ + "." + key, "expects a non-negative integer");
    }
    return j_[key].get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool dflt) {
    if (!has(key)) return dflt;
    if (!j_[key].is_boolean()) bad_key(path_ + "." + key, "expects a boolean");
    return j_[key].get<bool>();
  }

  std::string text(const std::string& key, const std::string& dflt) {
    if (!has(key)) return dflt;
    if (!j_[key].is_string()) bad_key(path_ + "." + key, "expects a string");
    return j_[key].get<std::string>();
  }

  Vec3 vec3(const std::string& key, const Vec3& dflt) {
    if (!has(key)) return dflt;
    const auto& a = j_[key];
    if (!a.is_array() || a.size() != 3 || !a[0].is_number() ||
        !a[1].is_number() || !a[2].is_number()) {
      bad_key(path_ + "." + key, "expects an array of 3 numbers");
    }
    return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
  }

  std::vector<double> numbers(const std::string& key,
                              const std::vector<double>& dflt) {
    if (!has(key)) return dflt;
    const auto& a = j_[key];
    if (!a.is_array()) bad_key(path_ + "." + key, "expects an array of numbers");
    std::vector<double> out;
    for (const auto& v : a) {
      if (!v.is_number()) bad_key(path_ + "." + key, "expects an array of numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }

  bool contains_raw(const std::string& key) const { return j_.contains(key); }
  const ordered_json& raw(const std::string& key) {
    seen_.insert(key);
    return j_[key];
  }

 private:
  const ordered_json& j_;
  std::string path_;
  mutable std::set<std::string> seen_;
};

}  // namespace

trapfield::GaussianBeam BeamConfig::to_beam() const {
  trapfield::GaussianBeam b;
  b.power_w = power_w;
  b.waist_m = waist_um * 1e-6;
  b.wavelength_m = wavelength_nm * 1e-9;
  b.direction = normalized(axis);
  b.focus = focus_um * 1e-6;
  b.polarization = polopt::state_from_theta_phi(pol_theta_rad, pol_phi_rad);
  b.freq_offset_hz = freq_offset_mhz * 1e6;
  return b;
}

spinmix::SpinMixParams SpinmixSection::to_params() const {
  spinmix::SpinMixParams p;
  p.q = use_b0_for_q ? spinmix::SpinMixParams::q_from_bias(b0_g)
                     : k::two_pi * q_hz;
  p.c = k::two_pi * c_hz;
  p.gradient_g_per_cm = gradient_mg_per_cm * 1e-3;
  p.omega_sep = k::two_pi * omega_sep_hz;
  p.damping_zeta = damping_zeta;
  p.r_tf_m = r_tf_um * 1e-6;
  return p;
}

RunConfig parse_config(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  RunConfig cfg;
  Section root(j, "");
  cfg.seed = root.uint64("seed", cfg.seed);
  cfg.out_dir = root.text("out_dir", cfg.out_dir);

  if (root.has("units")) {
    Section u(root.raw("units"), "units");
    cfg.polarizability_units = u.text("polarizability", cfg.polarizability_units);
    u.finish();
    static const std::set<std::string> allowed{"si", "cgs", "au", "all"};
    if (!allowed.count(cfg.polarizability_units)) {
      bad_key("units.polarizability", "expects one of si|cgs|au|all");
    }
  }

  if (root.has("atom")) {
    Section a(root.raw("atom"), "atom");
    cfg.atom.species = a.text("species", cfg.atom.species);
    cfg.atom.f = a.integer("f", cfg.atom.f);
    cfg.atom.g_f = a.number("g_f", cfg.atom.g_f);
    cfg.atom.wavelength_nm = a.number("wavelength_nm", cfg.atom.wavelength_nm);
    cfg.atom.lines_file = a.text("lines_file", cfg.atom.lines_file);
    cfg.atom.hyperfine_correction =
        a.number("hyperfine_correction", cfg.atom.hyperfine_correction);
    a.finish();
    if (cfg.atom.species != "Rb87") {
      bad_key("atom.species", "expects \"Rb87\" (the only shipped line table)");
    }
  }

  if (root.has("beams")) {
    const auto& arr = root.raw("beams");
    if (!arr.is_array()) bad_key("beams", "expects an array");
    int idx = 0;
    for (const auto& item : arr) {
      Section b(item, "beams[" + std::to_string(idx) + "]");
      BeamConfig bc;
      bc.name = b.text("name", "beam" + std::to_string(idx));
      bc.power_w = b.number("power_w", 0.0);
      bc.waist_um = b.number("waist_um", 0.0);
      bc.wavelength_nm = b.number("wavelength_nm", 1064.0);
      bc.axis = b.vec3("axis", {0, 0, 1});
      bc.focus_um = b.vec3("focus_um", {0, 0, 0});
      bc.pol_theta_rad = b.number("pol_theta_rad", 0.0);
      bc.pol_phi_rad = b.number("pol_phi_rad", 0.0);
      bc.freq_offset_mhz = b.number("freq_offset_mhz", 0.0);
      b.finish();
      cfg.beams.push_back(bc);
      ++idx;
    }
  }

  if (root.has("magnetics")) {
    Section m(root.raw("magnetics"), "magnetics");
    cfg.magnetics.bias_g = m.vec3("bias_g", cfg.magnetics.bias_g);
    cfg.magnetics.ambient_gradient_g_per_cm =
        m.number("ambient_gradient_g_per_cm", cfg.magnetics.ambient_gradient_g_per_cm);
    cfg.magnetics.gradient_axis = m.vec3("gradient_axis", cfg.magnetics.gradient_axis);
    m.finish();
  }

  if (root.has("ramsey")) {
    Section r(root.raw("ramsey"), "ramsey");
    if (!r.has("interrogation_s")) {
      bad_key("ramsey.interrogation_s", "is required (expects a number)");
    }
    cfg.ramsey.interrogation_s = r.number("interrogation_s", cfg.ramsey.interrogation_s);
    cfg.ramsey.shots = r.integer("shots", cfg.ramsey.shots);
    cfg.ramsey.contrast_a = r.number("contrast_a", cfg.ramsey.contrast_a);
    cfg.ramsey.contrast_b = r.number("contrast_b", cfg.ramsey.contrast_b);
    cfg.ramsey.noise_distribution =
        r.text("noise_distribution", cfg.ramsey.noise_distribution);
    cfg.ramsey.noise_rms_rad = r.number("noise_rms_rad", cfg.ramsey.noise_rms_rad);
    cfg.ramsey.readout_sigma = r.number("readout_sigma", cfg.ramsey.readout_sigma);
    cfg.ramsey.delta_b_g = r.number("delta_b_g", cfg.ramsey.delta_b_g);
    r.finish();
    if (cfg.ramsey.noise_distribution != "uniform" &&
        cfg.ramsey.noise_distribution != "gaussian") {
      bad_key("ramsey.noise_distribution", "expects \"uniform\" or \"gaussian\"");
    }
  }

  if (root.has("fit")) {
    Section f(root.raw("fit"), "fit");
    cfg.fit.sampson_refine = f.boolean("sampson_refine", cfg.fit.sampson_refine);
    cfg.fit.bootstrap_samples = f.integer("bootstrap_samples", cfg.fit.bootstrap_samples);
    f.finish();
  }

  if (root.has("protocol")) {
    Section p(root.raw("protocol"), "protocol");
    if (p.has("delayed_drop")) {
      Section d(p.raw("delayed_drop"), "protocol.delayed_drop");
      auto& dd = cfg.delayed_drop;
      dd.beam = d.text("beam", dd.beam);
      dd.drop_delay_a_s = d.number("drop_delay_a_s", dd.drop_delay_a_s);
      dd.drop_delay_b_s = d.number("drop_delay_b_s", dd.drop_delay_b_s);
      dd.interrogation_s = d.number("interrogation_s", dd.interrogation_s);
      dd.qwp_angles_deg = d.numbers("qwp_angles_deg", dd.qwp_angles_deg);
      dd.initial_offset_um = d.number("initial_offset_um", dd.initial_offset_um);
      dd.background_delta_b_g = d.number("background_delta_b_g", dd.background_delta_b_g);
      dd.cell_phi_k_rad = d.number("cell_phi_k_rad", dd.cell_phi_k_rad);
      dd.cell_theta_k_rad = d.number("cell_theta_k_rad", dd.cell_theta_k_rad);
      dd.qwp_zero_deg = d.number("qwp_zero_deg", dd.qwp_zero_deg);
      dd.anchor_sign = d.integer("anchor_sign", dd.anchor_sign);
      dd.shots = d.integer("shots", dd.shots);
      if (d.has("bias_set_g")) {
        const auto& arr = d.raw("bias_set_g");
        if (!arr.is_array()) {
          bad_key("protocol.delayed_drop.bias_set_g",
                  "expects an array of 3-vectors");
        }
        for (const auto& v : arr) {
          if (!v.is_array() || v.size() != 3 || !v[0].is_number() ||
              !v[1].is_number() || !v[2].is_number()) {
            bad_key("protocol.delayed_drop.bias_set_g",
                    "expects an array of 3-vectors");
          }
          dd.bias_set_g.push_back(
              {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()});
        }
      }
      d.finish();
    }
    if (p.has("nulling")) {
      Section nl(p.raw("nulling"), "protocol.nulling");
      auto& n = cfg.nulling;
      n.p_a_w_cm2_per_unit = nl.number("p_a_w_cm2_per_unit", n.p_a_w_cm2_per_unit);
      n.p_b_w_cm2_per_unit = nl.number("p_b_w_cm2_per_unit", n.p_b_w_cm2_per_unit);
      n.power_a = nl.number("power_a", n.power_a);
      n.power_b = nl.number("power_b", n.power_b);
      n.dp_prime_fracs = nl.numbers("dp_prime_fracs", n.dp_prime_fracs);
      n.qwp_angles_deg = nl.numbers("qwp_angles_deg", n.qwp_angles_deg);
      n.interrogation_s = nl.number("interrogation_s", n.interrogation_s);
      n.theta_null_deg = nl.number("theta_null_deg", n.theta_null_deg);
      n.cell_phi_k_rad = nl.number("cell_phi_k_rad", n.cell_phi_k_rad);
      n.cell_theta_k_rad = nl.number("cell_theta_k_rad", n.cell_theta_k_rad);
      n.background_delta_b_g = nl.number("background_delta_b_g", n.background_delta_b_g);
      n.qwp_quantization_mrad = nl.number("qwp_quantization_mrad", n.qwp_quantization_mrad);
      n.beam_c_enabled = nl.boolean("beam_c_enabled", n.beam_c_enabled);
      n.beam_c_intensity_w_cm2 =
          nl.number("beam_c_intensity_w_cm2", n.beam_c_intensity_w_cm2);
      n.beam_c_theta_deg = nl.number("beam_c_theta_deg", n.beam_c_theta_deg);
      n.shots = nl.integer("shots", n.shots);
      n.jobs = nl.integer("jobs", n.jobs);
      nl.finish();
    }
    p.finish();
  }

  if (root.has("spinmix")) {
    Section s(root.raw("spinmix"), "spinmix");
    auto& sm = cfg.spinmix;
    sm.q_hz = s.number("q_hz", sm.q_hz);
    sm.use_b0_for_q = s.boolean("use_b0_for_q", sm.use_b0_for_q);
    sm.b0_g = s.number("b0_g", sm.b0_g);
    sm.c_hz = s.number("c_hz", sm.c_hz);
    sm.gradient_mg_per_cm = s.number("gradient_mg_per_cm", sm.gradient_mg_per_cm);
    sm.omega_sep_hz = s.number("omega_sep_hz", sm.omega_sep_hz);
    sm.damping_zeta = s.number("damping_zeta", sm.damping_zeta);
    sm.r_tf_um = s.number("r_tf_um", sm.r_tf_um);
    sm.t_max_s = s.number("t_max_s", sm.t_max_s);
    sm.dt_out_s = s.number("dt_out_s", sm.dt_out_s);
    s.finish();
  }

  if (root.has("thermal")) {
    Section t(root.raw("thermal"), "thermal");
    auto& th = cfg.thermal;
    if (t.has("material")) {
      Section m(t.raw("material"), "thermal.material");
      auto& mat = th.material;
      mat.mu = m.number("mu_per_m", mat.mu);
      mat.k = m.number("conductivity_w_m_k", mat.k);
      mat.diffusivity = m.number("diffusivity_m2_s", mat.diffusivity);
      mat.alpha_cte = m.number("alpha_cte_per_k", mat.alpha_cte);
      mat.young_e = m.number("young_modulus_pa", mat.young_e);
      mat.poisson = m.number("poisson_ratio", mat.poisson);
      mat.stress_optic_k = m.number("stress_optic_per_pa", mat.stress_optic_k);
      mat.p11 = m.number("p11", mat.p11);
      mat.p12 = m.number("p12", mat.p12);
      mat.n0 = m.number("n0", mat.n0);
      m.finish();
    }
    th.scenario.p_odt_w = t.number("p_odt_w", th.scenario.p_odt_w);
    th.scenario.thickness_m = t.number("thickness_mm", th.scenario.thickness_m * 1e3) * 1e-3;
    th.scenario.beam_radius_m =
        t.number("beam_radius_um", th.scenario.beam_radius_m * 1e6) * 1e-6;
    th.scenario.exposure_s = t.number("exposure_s", th.scenario.exposure_s);
    th.scenario.wavelength_m =
        t.number("wavelength_nm", th.scenario.wavelength_m * 1e9) * 1e-9;
    th.profile_r_max_um = t.number("profile_r_max_um", th.profile_r_max_um);
    th.profile_points = t.integer("profile_points", th.profile_points);
    t.finish();
  }

  root.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str());
}

std::string RunConfig::canonical_json() const {
  ordered_json j;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  j["units"]["polarizability"] = polarizability_units;
  j["atom"] = {{"species", atom.species},
               {"f", atom.f},
               {"g_f", atom.g_f},
               {"wavelength_nm", atom.wavelength_nm},
               {"lines_file", atom.lines_file},
               {"hyperfine_correction", atom.hyperfine_correction}};
  j["beams"] = ordered_json::array();
  for (const auto& b : beams) {
    j["beams"].push_back({{"name", b.name},
                          {"power_w", b.power_w},
                          {"waist_um", b.waist_um},
                          {"wavelength_nm", b.wavelength_nm},
                          {"axis", {b.axis.x, b.axis.y, b.axis.z}},
                          {"focus_um", {b.focus_um.x, b.focus_um.y, b.focus_um.z}},
                          {"pol_theta_rad", b.pol_theta_rad},
                          {"pol_phi_rad", b.pol_phi_rad},
                          {"freq_offset_mhz", b.freq_offset_mhz}});
  }
  j["magnetics"] = {
      {"bias_g", {magnetics.bias_g.x, magnetics.bias_g.y, magnetics.bias_g.z}},
      {"ambient_gradient_g_per_cm", magnetics.ambient_gradient_g_per_cm},
      {"gradient_axis",
       {magnetics.gradient_axis.x, magnetics.gradient_axis.y, magnetics.gradient_axis.z}}};
  j["ramsey"] = {{"interrogation_s", ramsey.interrogation_s},
                 {"shots", ramsey.shots},
                 {"contrast_a", ramsey.contrast_a},
                 {"contrast_b", ramsey.contrast_b},
                 {"noise_distribution", ramsey.noise_distribution},
                 {"noise_rms_rad", ramsey.noise_rms_rad},
                 {"readout_sigma", ramsey.readout_sigma},
                 {"delta_b_g", ramsey.delta_b_g}};
  j["fit"] = {{"sampson_refine", fit.sampson_refine},
              {"bootstrap_samples", fit.bootstrap_samples}};
  auto bias_list = ordered_json::array();
  for (const auto& b : delayed_drop.bias_set_g) {
    bias_list.push_back({b.x, b.y, b.z});
  }
  j["protocol"]["delayed_drop"] = {
      {"beam", delayed_drop.beam},
      {"drop_delay_a_s", delayed_drop.drop_delay_a_s},
      {"drop_delay_b_s", delayed_drop.drop_delay_b_s},
      {"interrogation_s", delayed_drop.interrogation_s},
      {"qwp_angles_deg", delayed_drop.qwp_angles_deg},
      {"initial_offset_um", delayed_drop.initial_offset_um},
      {"background_delta_b_g", delayed_drop.background_delta_b_g},
      {"cell_phi_k_rad", delayed_drop.cell_phi_k_rad},
      {"cell_theta_k_rad", delayed_drop.cell_theta_k_rad},
      {"qwp_zero_deg", delayed_drop.qwp_zero_deg},
      {"anchor_sign", delayed_drop.anchor_sign},
      {"shots", delayed_drop.shots},
      {"bias_set_g", bias_list}};
  j["protocol"]["nulling"] = {
      {"p_a_w_cm2_per_unit", nulling.p_a_w_cm2_per_unit},
      {"p_b_w_cm2_per_unit", nulling.p_b_w_cm2_per_unit},
      {"power_a", nulling.power_a},
      {"power_b", nulling.power_b},
      {"dp_prime_fracs", nulling.dp_prime_fracs},
      {"qwp_angles_deg", nulling.qwp_angles_deg},
      {"interrogation_s", nulling.interrogation_s},
      {"theta_null_deg", nulling.theta_null_deg},
      {"cell_phi_k_rad", nulling.cell_phi_k_rad},
      {"cell_theta_k_rad", nulling.cell_theta_k_rad},
      {"background_delta_b_g", nulling.background_delta_b_g},
      {"qwp_quantization_mrad", nulling.qwp_quantization_mrad},
      {"beam_c_enabled", nulling.beam_c_enabled},
      {"beam_c_intensity_w_cm2", nulling.beam_c_intensity_w_cm2},
      {"beam_c_theta_deg", nulling.beam_c_theta_deg},
      {"shots", nulling.shots},
      {"jobs", nulling.jobs}};
  j["spinmix"] = {{"q_hz", spinmix.q_hz},
                  {"use_b0_for_q", spinmix.use_b0_for_q},
                  {"b0_g", spinmix.b0_g},
                  {"c_hz", spinmix.c_hz},
                  {"gradient_mg_per_cm", spinmix.gradient_mg_per_cm},
                  {"omega_sep_hz", spinmix.omega_sep_hz},
                  {"damping_zeta", spinmix.damping_zeta},
                  {"r_tf_um", spinmix.r_tf_um},
                  {"t_max_s", spinmix.t_max_s},
                  {"dt_out_s", spinmix.dt_out_s}};
  j["thermal"] = {{"material",
                   {{"mu_per_m", thermal.material.mu},
                    {"conductivity_w_m_k", thermal.material.k},
                    {"diffusivity_m2_s", thermal.material.diffusivity},
                    {"alpha_cte_per_k", thermal.material.alpha_cte},
                    {"young_modulus_pa", thermal.material.young_e},
                    {"poisson_ratio", thermal.material.poisson},
                    {"stress_optic_per_pa", thermal.material.stress_optic_k},
                    {"p11", thermal.material.p11},
                    {"p12", thermal.material.p12},
                    {"n0", thermal.material.n0}}},
                  {"p_odt_w", thermal.scenario.p_odt_w},
                  {"thickness_mm", thermal.scenario.thickness_m * 1e3},
                  {"beam_radius_um", thermal.scenario.beam_radius_m * 1e6},
                  {"exposure_s", thermal.scenario.exposure_s},
                  {"wavelength_nm", thermal.scenario.wavelength_m * 1e9},
                  {"profile_r_max_um", thermal.profile_r_max_um},
                  {"profile_points", thermal.profile_points}};
  return j.dump(2) + "\n";
}

}  // namespace vls::io
