// vlstool: batch front-end for the VLS toolkit. Subcommands mirror the
// measurement pipelines; every run writes its outputs plus a manifest
// (config hash, seed, file content hashes) into the output directory.
//
// Exit codes: 0 success, 2 config error, 3 numerical failure,
//             4 degenerate-fit error.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vls/atomprops.hpp"
#include "vls/constants.hpp"
#include "vls/errors.hpp"
#include "vls/manifest.hpp"
#include "vls/polopt.hpp"
#include "vls/protocols.hpp"
#include "vls/ramsey.hpp"
#include "vls/runconfig.hpp"
#include "vls/spinmix.hpp"
#include "vls/thermobi.hpp"
#include "vls/trapfield.hpp"

using namespace vls;
namespace k = vls::constants;

namespace {

constexpr double deg = k::pi / 180.0;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

io::RunConfig load_effective_config(const CommonArgs& args) {
  io::RunConfig cfg =
      args.config_path.empty() ? io::parse_config("{}")
                               : io::load_config(args.config_path);
  if (args.seed_set) cfg.seed = args.seed;
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  return cfg;
}

io::RunManifest make_manifest(const io::RunConfig& cfg) {
  io::RunManifest m;
  m.config_hash = io::content_hash(cfg.canonical_json());
  m.seed = cfg.seed;
  m.wall_clock_utc = io::now_utc_iso8601();
  return m;
}

void finish(io::RunManifest& manifest, const io::RunConfig& cfg) {
  std::ofstream f(cfg.out_dir + "/manifest.json");
  f << manifest.to_json();
}

struct AtomDerived {
  double omega = 0.0;
  double alpha_v = 0.0;
  double alpha_scalar = 0.0;
  std::vector<atomprops::FineStructureLine> lines;
};

AtomDerived derive_atom(const io::AtomConfig& atom) {
  AtomDerived out;
  out.lines = atom.lines_file.empty()
                  ? atomprops::rb87_d_lines()
                  : atomprops::load_line_table(atom.lines_file);
  out.omega = k::two_pi * k::speed_of_light / (atom.wavelength_nm * 1e-9);
  const auto a1 = atomprops::alpha1_nJ(out.lines, atomprops::HalfInt(1), out.omega);
  atomprops::HyperfineLevel level = atomprops::rb87_f1_level();
  level.g_f = atom.g_f;
  out.alpha_v =
      atomprops::alpha_v_nJF(a1, level, atom.hyperfine_correction).value_si;
  out.alpha_scalar =
      atomprops::alpha_scalar_nJ(out.lines, atomprops::HalfInt(1), out.omega)
          .value_si;
  return out;
}

protocols::PhysicsConfig physics_from_config(const io::RunConfig& cfg,
                                             const AtomDerived& atom) {
  protocols::PhysicsConfig phys;
  phys.alpha_v_si = atom.alpha_v;
  phys.g_f = cfg.atom.g_f;
  phys.f = cfg.atom.f;
  phys.bias_g = cfg.magnetics.bias_g;
  phys.shots = cfg.ramsey.shots;
  phys.contrast_a = cfg.ramsey.contrast_a;
  phys.contrast_b = cfg.ramsey.contrast_b;
  phys.readout_sigma = cfg.ramsey.readout_sigma;
  phys.fit.sampson_refine = cfg.fit.sampson_refine;
  phys.fit.bootstrap_samples = cfg.fit.bootstrap_samples;
  phys.seed = cfg.seed;
  return phys;
}

int cmd_polarizability(const CommonArgs& args, const std::string& units_override) {
  auto cfg = load_effective_config(args);
  if (!units_override.empty()) cfg.polarizability_units = units_override;
  const auto atom = derive_atom(cfg.atom);
  auto manifest = make_manifest(cfg);

  atomprops::Polarizability av;
  av.value_si = atom.alpha_v;
  av.rank = atomprops::Rank::vector;
  const double vls_hz =
      atomprops::vls_per_intensity_hz_cm2(av, atomprops::HalfInt(2 * cfg.atom.f));

  const auto& u = cfg.polarizability_units;
  std::ostringstream rep;
  char buf[640];
  std::snprintf(buf, sizeof(buf),
                "{\n"
                "  \"species\": \"%s\",\n"
                "  \"wavelength_nm\": %.17g,\n"
                "  \"alpha_v_si\": %.17g,\n"
                "  \"alpha_v_cgs_cm3\": %.17g,\n"
                "  \"alpha_v_atomic_units\": %.17g,\n"
                "  \"alpha_scalar_si\": %.17g,\n"
                "  \"vls_per_intensity_hz_w_cm2\": %.17g\n"
                "}\n",
                cfg.atom.species.c_str(), cfg.atom.wavelength_nm, av.value_si,
                av.cgs_cm3(), av.atomic_units(), atom.alpha_scalar, vls_hz);
  rep << buf;
  io::emit_file(manifest, cfg.out_dir, "polarizability.json", rep.str());
  finish(manifest, cfg);

  if (u == "si" || u == "all")
    std::printf("alpha_v = %.4g C m^2/V\n", av.value_si);
  if (u == "cgs" || u == "all")
    std::printf("alpha_v = %.4g cm^3 (cgs)\n", av.cgs_cm3());
  if (u == "au" || u == "all")
    std::printf("alpha_v = %.4g a0^3 (atomic units)\n", av.atomic_units());
  std::printf("vls per intensity = h x %.4g Hz W^-1 cm^2\n", vls_hz);
  return 0;
}

int cmd_simulate(const CommonArgs& args) {
  const auto cfg = load_effective_config(args);
  auto manifest = make_manifest(cfg);

  ramsey::RamseyConfig rc;
  rc.interrogation_s = cfg.ramsey.interrogation_s;
  rc.pulse_phases = ramsey::RamseyConfig::phase_grid(cfg.ramsey.shots);
  rc.contrast_a = cfg.ramsey.contrast_a;
  rc.contrast_b = cfg.ramsey.contrast_b;
  rc.noise = cfg.ramsey.noise_distribution == "gaussian"
                 ? ramsey::NoiseDistribution::gaussian
                 : ramsey::NoiseDistribution::uniform;
  rc.noise_rms_rad = cfg.ramsey.noise_rms_rad;
  rc.readout_sigma = cfg.ramsey.readout_sigma;
  rc.delta_b_g = cfg.ramsey.delta_b_g;
  rc.b0_g = norm(cfg.magnetics.bias_g);
  rc.g_f = cfg.atom.g_f;
  rc.seed = cfg.seed;

  const auto shots = ramsey::simulate_shots(rc);
  std::ostringstream shots_csv;
  ramsey::write_shots_csv(shots_csv, shots);
  io::emit_file(manifest, cfg.out_dir, "shots.csv", shots_csv.str());

  std::vector<ramsey::Point2> pts(shots.size());
  for (std::size_t i = 0; i < shots.size(); ++i) pts[i] = {shots[i].fza, shots[i].fzb};
  ramsey::EllipseFitOptions opts;
  opts.sampson_refine = cfg.fit.sampson_refine;
  opts.bootstrap_samples = cfg.fit.bootstrap_samples;
  opts.seed = cfg.seed;
  const auto fit = ramsey::ellipse_fit(pts, opts);
  io::emit_file(manifest, cfg.out_dir, "fit.json", ramsey::fit_to_json(fit));
  finish(manifest, cfg);

  std::printf("simulated %zu shots; delta_phi = %.6g +- %.2g rad\n",
              shots.size(), fit.delta_phi, fit.u_delta_phi);
  return 0;
}

int cmd_fit(const CommonArgs& args, const std::string& input) {
  const auto cfg = load_effective_config(args);
  auto manifest = make_manifest(cfg);
  std::ifstream in(input);
  if (!in) throw ConfigError("fit: cannot open '" + input + "'");
  const auto pts = ramsey::read_shots_csv(in);
  ramsey::EllipseFitOptions opts;
  opts.sampson_refine = cfg.fit.sampson_refine;
  opts.bootstrap_samples = cfg.fit.bootstrap_samples;
  opts.seed = cfg.seed;
  const auto fit = ramsey::ellipse_fit(pts, opts);
  io::emit_file(manifest, cfg.out_dir, "fit.json", ramsey::fit_to_json(fit));
  finish(manifest, cfg);
  std::printf("fit %d points; delta_phi = %.6g +- %.2g rad\n", fit.n_points,
              fit.delta_phi, fit.u_delta_phi);
  return 0;
}

int cmd_null(const CommonArgs& args) {
  const auto cfg = load_effective_config(args);
  const auto atom = derive_atom(cfg.atom);
  auto manifest = make_manifest(cfg);

  const auto& n = cfg.nulling;
  protocols::InTrapPlan plan;
  plan.p_a = n.p_a_w_cm2_per_unit;
  plan.p_b = n.p_b_w_cm2_per_unit;
  plan.power_a = n.power_a;
  plan.power_b = n.power_b;
  plan.interrogation_s = n.interrogation_s;
  plan.qwp_quantization_rad = n.qwp_quantization_mrad * 1e-3;
  plan.beam_c_enabled = n.beam_c_enabled;
  plan.beam_c_intensity_w_cm2 = n.beam_c_intensity_w_cm2;
  plan.beam_c_theta_rad = n.beam_c_theta_deg * deg;
  plan.dp_prime_fracs = n.dp_prime_fracs;
  if (plan.dp_prime_fracs.empty()) {
    for (int i = 0; i < 11; ++i) plan.dp_prime_fracs.push_back(-0.25 + 0.05 * i);
  }
  if (!n.qwp_angles_deg.empty()) {
    for (double a : n.qwp_angles_deg) plan.qwp_angles_rad.push_back(a * deg);
  } else {
    const double nearest = (n.theta_null_deg + 0.0060161) * deg;
    const double spacing = (10.0 / 60.0 / 5.0) * deg;
    for (int j = -2; j <= 3; ++j) {
      plan.qwp_angles_rad.push_back(nearest + j * spacing);
    }
  }

  auto phys = physics_from_config(cfg, atom);
  phys.cell_phi_k = n.cell_phi_k_rad;
  phys.cell_theta_k = n.cell_theta_k_rad;
  phys.qwp_zero_rad = n.theta_null_deg * deg -
                      polopt::nulling_angle(n.cell_phi_k_rad, n.cell_theta_k_rad);
  phys.background_delta_b_g = n.background_delta_b_g;
  phys.shots = n.shots;
  phys.jobs = n.jobs;

  const auto res = protocols::nulling_pipeline(plan, phys);
  io::emit_file(manifest, cfg.out_dir, "nulling.json",
                protocols::nulling_to_json(res));
  std::vector<double> angle_list;
  for (const auto& a : res.per_angle) angle_list.push_back(a.qwp_angle_rad);
  std::ostringstream pts_csv, slopes_csv;
  protocols::write_nulling_points_csv(pts_csv, angle_list, res.point_di_over_i,
                                      res.point_db_g, res.point_u_db_g);
  protocols::write_nulling_slopes_csv(slopes_csv, res);
  io::emit_file(manifest, cfg.out_dir, "nulling_points.csv", pts_csv.str());
  io::emit_file(manifest, cfg.out_dir, "nulling_slopes.csv", slopes_csv.str());
  finish(manifest, cfg);

  std::printf("alpha_v = %.4g +- %.2g C m^2/V\n", res.alpha_v_si, res.u_alpha_v_si);
  std::printf("theta_N = %.6f +- %.6f deg\n", res.theta_null_rad / deg,
              res.u_theta_null_rad / deg);
  std::printf("suppression ratio = %.3g +- %.2g (alt 2|dtheta| = %.3g)\n",
              res.suppression_ratio, res.u_suppression_ratio,
              res.alt_suppression_2dtheta);
  if (args.format == "json") std::fputs(protocols::nulling_to_json(res).c_str(), stdout);
  return 0;
}

int cmd_delayed_drop(const CommonArgs& args) {
  const auto cfg = load_effective_config(args);
  const auto atom = derive_atom(cfg.atom);
  auto manifest = make_manifest(cfg);

  const auto& d = cfg.delayed_drop;
  protocols::DelayedDropPlan plan;
  plan.drop_delay_a_s = d.drop_delay_a_s;
  plan.drop_delay_b_s = d.drop_delay_b_s;
  plan.interrogation_s = d.interrogation_s;
  plan.initial_offset_m = d.initial_offset_um * 1e-6;
  plan.anchor_sign = d.anchor_sign;
  if (!d.qwp_angles_deg.empty()) {
    for (double a : d.qwp_angles_deg) plan.qwp_angles_rad.push_back(a * deg);
  } else {
    for (int i = 0; i < 24; ++i) plan.qwp_angles_rad.push_back(k::two_pi * i / 24);
  }
  // probe beam from the named beams entry, else the reference z' beam
  bool found = false;
  for (const auto& b : cfg.beams) {
    if (b.name == d.beam) {
      plan.probe_beam = b.to_beam();
      found = true;
      break;
    }
  }
  if (!found) {
    if (!cfg.beams.empty()) {
      plan.probe_beam = cfg.beams.front().to_beam();
    } else {
      plan.probe_beam.power_w = 0.26558;
      plan.probe_beam.waist_m = 67e-6;
      plan.probe_beam.wavelength_m = 1064e-9;
      plan.probe_beam.direction = {0, 0, 1};
    }
  }

  auto phys = physics_from_config(cfg, atom);
  phys.cell_phi_k = d.cell_phi_k_rad;
  phys.cell_theta_k = d.cell_theta_k_rad;
  phys.qwp_zero_rad = d.qwp_zero_deg * deg;
  phys.background_delta_b_g = d.background_delta_b_g;
  phys.shots = d.shots;
  // the scan runs with the bias along the probed beam (cos nu = 1, maximum
  // sensitivity); only the configured bias magnitude is used here
  phys.bias_g = norm(cfg.magnetics.bias_g) > 0
                    ? normalized(plan.probe_beam.direction) * norm(cfg.magnetics.bias_g)
                    : Vec3{0, 0, 0.5};

  const auto res = protocols::delayed_drop_scan(plan, phys);
  std::ostringstream csv;
  protocols::write_delayed_drop_csv(csv, res);
  io::emit_file(manifest, cfg.out_dir, "delayed_drop.csv", csv.str());

  std::string direction_part = "";
  if (d.bias_set_g.size() >= 3) {
    plan.bias_set_g = d.bias_set_g;
    const auto dir = protocols::delayed_drop_direction(plan, phys);
    char dbuf[256];
    std::snprintf(dbuf, sizeof(dbuf),
                  "  \"vls_direction\": [%.17g, %.17g, %.17g],\n"
                  "  \"vls_magnitude_g\": %.17g,\n",
                  dir.fit.unit.x, dir.fit.unit.y, dir.fit.unit.z,
                  dir.fit.magnitude);
    direction_part = dbuf;
  }

  char buf[768];
  std::snprintf(buf, sizeof(buf),
                "{\n  \"separation_m\": %.17g,\n"
                "  \"peak_gradient_g_per_cm\": %.17g,\n"
                "  \"u_peak_gradient_g_per_cm\": %.17g,\n"
                "%s"
                "  \"fit_amplitude_g\": %.17g,\n"
                "  \"fit_theta_null_rad\": %.17g,\n"
                "  \"fit_offset_g\": %.17g\n}\n",
                res.separation_m, res.peak_gradient_g_per_cm,
                res.u_peak_gradient_g_per_cm, direction_part.c_str(),
                res.fit.amplitude, res.fit.theta0, res.fit.offset);
  io::emit_file(manifest, cfg.out_dir, "delayed_drop.json", buf);
  finish(manifest, cfg);

  std::printf("dy = %.4g um; peak gradient = %.4g +- %.2g mG/cm\n",
              res.separation_m * 1e6, res.peak_gradient_g_per_cm * 1e3,
              res.u_peak_gradient_g_per_cm * 1e3);
  return 0;
}

int cmd_spinmix(const CommonArgs& args) {
  const auto cfg = load_effective_config(args);
  auto manifest = make_manifest(cfg);
  const auto params = cfg.spinmix.to_params();
  const auto traj = spinmix::evolve_sma(spinmix::initial_after_pi2(), params,
                                        cfg.spinmix.t_max_s, cfg.spinmix.dt_out_s);
  std::ostringstream csv;
  spinmix::write_trajectory_csv(csv, traj);
  io::emit_file(manifest, cfg.out_dir, "spinmix.csv", csv.str());

  const int periods =
      spinmix::count_oscillation_periods(traj, 0.0, cfg.spinmix.t_max_s);
  const double amp = spinmix::oscillation_amplitude(
      traj, 0.25 * cfg.spinmix.t_max_s, cfg.spinmix.t_max_s);
  double min_overlap = 1.0;
  for (const auto& pt : traj) min_overlap = std::min(min_overlap, pt.overlap);
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "{\n  \"oscillation_periods\": %d,\n"
                "  \"oscillations_visible\": %s,\n"
                "  \"amplitude_late_window\": %.17g,\n"
                "  \"min_overlap\": %.17g,\n"
                "  \"separation_suppressed_mixing\": %s\n}\n",
                periods, periods >= 3 ? "true" : "false", amp, min_overlap,
                min_overlap < 0.5 ? "true" : "false");
  io::emit_file(manifest, cfg.out_dir, "spinmix_summary.json", buf);
  finish(manifest, cfg);
  std::printf("%d oscillation periods; late-window amplitude %.4g; "
              "min overlap %.3g\n", periods, amp, min_overlap);
  return 0;
}

int cmd_thermal(const CommonArgs& args) {
  const auto cfg = load_effective_config(args);
  auto manifest = make_manifest(cfg);
  const auto rep = thermobi::evaluate(cfg.thermal.scenario, cfg.thermal.material);
  io::emit_file(manifest, cfg.out_dir, "thermal.json",
                thermobi::report_to_json(rep));
  std::ostringstream csv;
  thermobi::write_profile_csv(csv, cfg.thermal.scenario, cfg.thermal.material,
                              cfg.thermal.profile_r_max_um * 1e-6,
                              cfg.thermal.profile_points);
  io::emit_file(manifest, cfg.out_dir, "thermal_profile.csv", csv.str());
  finish(manifest, cfg);
  std::printf("T0 = %.4g K; dT = %.4g K; sigma = %.4g Pa; "
              "theta_max = %.4g rad\n",
              rep.t0_k, rep.delta_t_k, rep.sigma_pa, rep.theta_max_rad);
  return 0;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON run configuration");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--format", args.format, "report format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option_function<std::uint64_t>(
      "--seed",
      [&args](const std::uint64_t& s) {
        args.seed = s;
        args.seed_set = true;
      },
      "override the config seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vlstool: vector-light-shift measurement and nulling toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string fit_input;
  std::string pol_units;

  auto* pol = app.add_subcommand(
      "polarizability", "compute scalar/vector polarizabilities and unit "
                        "conversions; writes polarizability.json");
  add_common(pol, args);
  pol->add_option("--units", pol_units, "report units: si|cgs|au|all")
      ->check(CLI::IsMember({"si", "cgs", "au", "all"}));

  auto* sim = app.add_subcommand(
      "simulate", "simulate differential Ramsey shots and fit the ellipse; "
                  "writes shots.csv (pulse_phase_rad,fza,fzb) and fit.json");
  add_common(sim, args);

  auto* fit = app.add_subcommand(
      "fit", "ellipse-fit an existing shots CSV (pulse_phase_rad,fza,fzb); "
             "writes fit.json");
  add_common(fit, args);
  fit->add_option("--input", fit_input, "shots CSV path")->required();

  auto* nul = app.add_subcommand(
      "null", "in-trap nulling pipeline; writes nulling.json, "
              "nulling_points.csv (qwp_angle_rad,di_over_i,delta_b_vls_g,"
              "u_delta_b_vls_g) and nulling_slopes.csv (qwp_angle_rad,"
              "slope_g_per_w_cm2,u_slope)");
  add_common(nul, args);

  auto* dd = app.add_subcommand(
      "delayed-drop", "delayed-drop scan across one beam; writes "
                      "delayed_drop.csv (qwp_angle_rad,delta_b_g,u_delta_b_g,"
                      "gradient_g_per_cm) and delayed_drop.json");
  add_common(dd, args);

  auto* sm = app.add_subcommand(
      "spinmix", "single-mode spin mixing with component separation; writes "
                 "spinmix.csv (t_s,rho_m1,rho_0,rho_p1,y_m1_m,y_p1_m,lambda) "
                 "and spinmix_summary.json");
  add_common(sm, args);

  auto* th = app.add_subcommand(
      "thermal", "window thermal-birefringence estimate; writes thermal.json "
                 "and thermal_profile.csv (r_m,retardance_rad)");
  add_common(th, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (pol->parsed()) return cmd_polarizability(args, pol_units);
    if (sim->parsed()) return cmd_simulate(args);
    if (fit->parsed()) return cmd_fit(args, fit_input);
    if (nul->parsed()) return cmd_null(args);
    if (dd->parsed()) return cmd_delayed_drop(args);
    if (sm->parsed()) return cmd_spinmix(args);
    if (th->parsed()) return cmd_thermal(args);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const DegenerateFitError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
