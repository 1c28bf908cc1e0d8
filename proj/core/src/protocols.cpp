#include "vls/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "vls/constants.hpp"
#include "vls/errors.hpp"
#include "vls/polopt.hpp"
#include "vls/rng.hpp"

namespace vls::protocols {

namespace k = vls::constants;

double freefall_separation_m(double t_delay_s) {
  return 0.5 * k::standard_gravity * t_delay_s * t_delay_s;
}

double delta_b_from_phase_g(double dphi, double dphi_bg, double t_s, double g_f) {
  return (dphi - dphi_bg) / (k::gyromag_rad_s_g(g_f) * t_s);
}

void DelayedDropPlan::validate() const {
  if (interrogation_s > 5e-3) {
    throw ConfigError("delayed_drop: interrogation must be <= 5 ms (freefall)");
  }
  if (drop_delay_a_s < 0 || drop_delay_b_s < 0) {
    throw ConfigError("delayed_drop: drop delays must be >= 0");
  }
  if (qwp_angles_rad.size() < 3) {
    throw ConfigError("delayed_drop: need >= 3 QWP angles");
  }
  probe_beam.validate();
}

void InTrapPlan::validate() const {
  if (!(p_a > 0) || !(p_b > 0)) {
    throw ConfigError("nulling: coupling coefficients p_a, p_b must be > 0");
  }
  if (qwp_angles_rad.size() < 3) {
    throw ConfigError("nulling: need >= 3 QWP angles");
  }
  if (dp_prime_fracs.size() < 3) {
    throw ConfigError("nulling: need >= 3 dP' points per angle");
  }
  for (double f : dp_prime_fracs) {
    if (power_a * (1.0 + f) < 0) {
      throw ConfigError("nulling: schedule drives a negative intensity");
    }
  }
}

std::vector<double> restore_signs(std::span<const double> folded,
                                  std::size_t anchor_index, int anchor_sign) {
  std::vector<double> out(folded.size());
  if (folded.empty()) return out;
  const double s0 = anchor_sign >= 0 ? 1.0 : -1.0;
  out[anchor_index] = s0 * folded[anchor_index];
  // pick the sign closest to the linear extrapolation of the restored
  // trend; plain nearest-neighbor continuity is ambiguous at the zeros
  auto walk = [&](std::size_t i, std::size_t p1, bool have_p2, std::size_t p2) {
    const double predicted =
        have_p2 ? 2.0 * out[p1] - out[p2] : out[p1];
    out[i] = std::abs(folded[i] - predicted) <= std::abs(-folded[i] - predicted)
                 ? folded[i] : -folded[i];
  };
  for (std::size_t i = anchor_index + 1; i < folded.size(); ++i) {
    walk(i, i - 1, i >= anchor_index + 2, i - 2);
  }
  for (std::size_t i = anchor_index; i-- > 0;) {
    walk(i, i + 1, i + 2 <= anchor_index, i + 2);
  }
  return out;
}

namespace {

struct PhaseMeasurement {
  double dphi = 0.0;
  double u = 0.0;
};

// one simulated differential Ramsey measurement reduced to |dphi|
PhaseMeasurement measure_phase(double delta_b_g, double t_s,
                               const PhysicsConfig& phys, std::uint64_t salt) {
  ramsey::RamseyConfig cfg;
  cfg.interrogation_s = t_s;
  cfg.pulse_phases = ramsey::RamseyConfig::phase_grid(phys.shots);
  const double qz = ramsey::qz_contrast(t_s, norm(phys.bias_g));
  cfg.contrast_a = phys.contrast_a * qz;
  cfg.contrast_b = phys.contrast_b * qz;
  cfg.noise = ramsey::NoiseDistribution::uniform;
  cfg.delta_b_g = delta_b_g;
  cfg.b0_g = norm(phys.bias_g);
  cfg.readout_sigma = phys.readout_sigma;
  cfg.g_f = phys.g_f;
  cfg.seed = rng::mix64(phys.seed ^ salt);

  const auto shots = ramsey::simulate_shots(cfg);
  std::vector<ramsey::Point2> pts(shots.size());
  for (std::size_t i = 0; i < shots.size(); ++i) pts[i] = {shots[i].fza, shots[i].fzb};
  ramsey::EllipseFitOptions fopts = phys.fit;
  fopts.seed = cfg.seed ^ 0xb0075ull;
  const auto fit = ramsey::ellipse_fit(pts, fopts);
  return {fit.delta_phi, fit.u_delta_phi};
}

template <typename F>
void run_jobs(int n, int jobs, F&& body) {
  if (jobs <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::future<void>> futs;
  const int chunk = (n + jobs - 1) / jobs;
  for (int j = 0; j < jobs; ++j) {
    const int lo = j * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    futs.push_back(std::async(std::launch::async, [lo, hi, &body] {
      for (int i = lo; i < hi; ++i) body(i);
    }));
  }
  for (auto& f : futs) f.get();
}

}  // namespace

DelayedDropResult delayed_drop_scan(const DelayedDropPlan& plan,
                                    const PhysicsConfig& phys) {
  plan.validate();
  const Vec3 down{0, -1, 0};
  const double y_a = freefall_separation_m(plan.drop_delay_a_s);
  const double y_b = freefall_separation_m(plan.drop_delay_b_s);
  const double dy = y_a - y_b;
  if (!(dy > 0)) throw ConfigError("delayed_drop: BEC_A must fall further than BEC_B");

  const Vec3 r_b = plan.probe_beam.focus + (plan.initial_offset_m + y_b) * down;
  const Vec3 r_a = plan.probe_beam.focus + (plan.initial_offset_m + y_a) * down;
  const double i_a = trapfield::intensity_at(plan.probe_beam, r_a);
  const double i_b = trapfield::intensity_at(plan.probe_beam, r_b);
  const double gamma_t = k::gyromag_rad_s_g(phys.g_f) * plan.interrogation_s;

  const std::size_t n = plan.qwp_angles_rad.size();
  std::vector<double> dphi(n), u_dphi(n), truth(n);
  run_jobs(static_cast<int>(n), phys.jobs, [&](int j) {
    const double theta = plan.qwp_angles_rad[j] - phys.qwp_zero_rad;
    const double circ =
        polopt::circularity_after_cell(theta, phys.cell_phi_k, phys.cell_theta_k);
    const Vec3 bv_a = polopt::fictitious_field(i_a, circ, plan.probe_beam.direction,
                                               phys.alpha_v_si, phys.g_f, phys.f);
    const Vec3 bv_b = polopt::fictitious_field(i_b, circ, plan.probe_beam.direction,
                                               phys.alpha_v_si, phys.g_f, phys.f);
    const double db = norm(phys.bias_g + bv_a) - norm(phys.bias_g + bv_b) +
                      phys.background_delta_b_g;
    truth[j] = db;
    const auto m = measure_phase(db, plan.interrogation_s, phys,
                                 rng::fnv1a("dd.angle") + 7919ull * j);
    dphi[j] = m.dphi;
    u_dphi[j] = m.u;
  });

  // background run with the dipole light off
  const auto bg = measure_phase(phys.background_delta_b_g, plan.interrogation_s,
                                phys, rng::fnv1a("dd.background"));
  const double bg_signed =
      (phys.background_delta_b_g < 0 ? -1.0 : 1.0) * bg.dphi;

  std::size_t anchor = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (dphi[j] > dphi[anchor]) anchor = j;
  }
  const auto signed_phi = restore_signs(dphi, anchor, plan.anchor_sign);

  DelayedDropResult res;
  res.qwp_angles_rad = plan.qwp_angles_rad;
  res.separation_m = dy;
  res.dphi_background = bg_signed;
  res.delta_b_g.resize(n);
  res.u_delta_b_g.resize(n);
  res.gradient_g_per_cm.resize(n);
  const double dy_cm = dy * 100.0;
  for (std::size_t j = 0; j < n; ++j) {
    res.delta_b_g[j] = (signed_phi[j] - bg_signed) / gamma_t;
    res.u_delta_b_g[j] = std::hypot(u_dphi[j], bg.u) / gamma_t;
    res.gradient_g_per_cm[j] = res.delta_b_g[j] / dy_cm;
  }
  res.fit = fitting::fit_sin2(res.qwp_angles_rad, res.delta_b_g, res.u_delta_b_g);
  res.peak_gradient_g_per_cm = std::abs(res.fit.amplitude) / dy_cm;
  res.u_peak_gradient_g_per_cm = res.fit.u_amplitude / dy_cm;
  return res;
}

DirectionScanResult delayed_drop_direction(const DelayedDropPlan& plan,
                                           const PhysicsConfig& phys) {
  plan.validate();
  if (plan.bias_set_g.size() < 3) {
    throw ConfigError("delayed_drop_direction: need >= 3 bias directions");
  }
  const Vec3 down{0, -1, 0};
  const double y_a = plan.initial_offset_m + freefall_separation_m(plan.drop_delay_a_s);
  const double y_b = plan.initial_offset_m + freefall_separation_m(plan.drop_delay_b_s);
  const Vec3 r_a = plan.probe_beam.focus + y_a * down;
  const Vec3 r_b = plan.probe_beam.focus + y_b * down;
  const double i_a = trapfield::intensity_at(plan.probe_beam, r_a);
  const double i_b = trapfield::intensity_at(plan.probe_beam, r_b);
  const double gamma_t = k::gyromag_rad_s_g(phys.g_f) * plan.interrogation_s;

  // probe at the schedule angle with the largest circularity
  double theta_star = plan.qwp_angles_rad.front();
  double best = -1.0;
  for (double th : plan.qwp_angles_rad) {
    const double c = std::abs(polopt::circularity_after_cell(
        th - phys.qwp_zero_rad, phys.cell_phi_k, phys.cell_theta_k));
    if (c > best) { best = c; theta_star = th; }
  }
  const double circ = polopt::circularity_after_cell(
      theta_star - phys.qwp_zero_rad, phys.cell_phi_k, phys.cell_theta_k);

  DirectionScanResult out;
  std::vector<Vec3> axes;
  for (std::size_t b = 0; b < plan.bias_set_g.size(); ++b) {
    PhysicsConfig pb = phys;
    pb.bias_g = plan.bias_set_g[b];
    const Vec3 bv_a = polopt::fictitious_field(i_a, circ, plan.probe_beam.direction,
                                               phys.alpha_v_si, phys.g_f, phys.f);
    const Vec3 bv_b = polopt::fictitious_field(i_b, circ, plan.probe_beam.direction,
                                               phys.alpha_v_si, phys.g_f, phys.f);
    const double db_true = norm(pb.bias_g + bv_a) - norm(pb.bias_g + bv_b) +
                           phys.background_delta_b_g;
    const auto m = measure_phase(db_true, plan.interrogation_s, pb,
                                 rng::fnv1a("dd.direction") + 4241ull * b);
    const auto mbg = measure_phase(phys.background_delta_b_g, plan.interrogation_s,
                                   pb, rng::fnv1a("dd.direction.bg") + 4241ull * b);
    // signs from the configured geometry (the fold cannot resolve them)
    const double sign = db_true >= 0 ? 1.0 : -1.0;
    const double bg_sign = phys.background_delta_b_g >= 0 ? 1.0 : -1.0;
    out.delta_b_g.push_back((sign * m.dphi - bg_sign * mbg.dphi) / gamma_t);
    axes.push_back(normalized(plan.bias_set_g[b]));
  }
  out.fit = infer_vls_direction(axes, out.delta_b_g);
  return out;
}

DirectionFit infer_vls_direction(std::span<const Vec3> bias_directions,
                                 std::span<const double> delta_b_g) {
  const int n = static_cast<int>(bias_directions.size());
  if (n < 3 || delta_b_g.size() != bias_directions.size()) {
    throw std::invalid_argument("infer_vls_direction: need >= 3 bias measurements");
  }
  Eigen::MatrixXd m(n, 3);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    const Vec3 b = normalized(bias_directions[i]);
    m.row(i) << b.x, b.y, b.z;
    d(i) = delta_b_g[i];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues()(2) < 1e-10 * svd.singularValues()(0)) {
    throw NumericalError("infer_vls_direction: bias set does not span 3-space");
  }
  const Eigen::Vector3d v = svd.solve(d);
  DirectionFit out;
  out.magnitude = v.norm();
  if (out.magnitude == 0.0) {
    out.unit = {0, 0, 1};
    return out;
  }
  out.unit = Vec3{v(0), v(1), v(2)} / out.magnitude;
  return out;
}

double balance_offset(double p_a, double p_b, double power_a, double power_b) {
  if (!(p_a > 0)) throw std::invalid_argument("balance_offset: p_a must be > 0");
  return p_b / p_a * power_b - power_a;
}

double normalized_intensity(double dp_prime, double power_a) {
  if (power_a == 0.0) throw std::invalid_argument("normalized_intensity: P_A = 0");
  return dp_prime / power_a;
}

double suppression_ratio(double min_slope, double theta_slope) {
  if (theta_slope == 0.0) {
    throw std::invalid_argument("suppression_ratio: zero theta slope");
  }
  return std::abs(min_slope) / (0.5 * std::abs(theta_slope));
}

NullingResult nulling_pipeline(const InTrapPlan& plan, const PhysicsConfig& phys) {
  plan.validate();
  const double gamma_g = k::gyromag_rad_s_g(phys.g_f);
  const double gamma_t = gamma_g * plan.interrogation_s;
  const Vec3 axis_ab = normalized(phys.bias_g);  // bias aligned with split beams
  // dP' is referenced to the balance point, so the balanced intensity is
  // simply p_B P_B; balance_offset() gives the rf offset that realizes it
  const double i0_w_cm2 = plan.p_b * plan.power_b;

  const int na = static_cast<int>(plan.qwp_angles_rad.size());
  const int ni = static_cast<int>(plan.dp_prime_fracs.size());

  std::vector<double> angles(na);
  for (int j = 0; j < na; ++j) {
    double a = plan.qwp_angles_rad[j];
    if (plan.qwp_quantization_rad > 0) {
      a = std::round(a / plan.qwp_quantization_rad) * plan.qwp_quantization_rad;
    }
    angles[j] = a;
  }

  // forward model for the field difference at one (angle, dI) point
  auto model_db = [&](int j, int i) {
    const double theta = angles[j] - phys.qwp_zero_rad;
    const double circ =
        polopt::circularity_after_cell(theta, phys.cell_phi_k, phys.cell_theta_k);
    const double di_w_cm2 = plan.p_a * plan.dp_prime_fracs[i] * plan.power_a;
    const double ia = (i0_w_cm2 + di_w_cm2) * k::w_cm2_to_w_m2;
    const double ib = i0_w_cm2 * k::w_cm2_to_w_m2;
    Vec3 bv_a = polopt::fictitious_field(ia, circ, axis_ab, phys.alpha_v_si,
                                         phys.g_f, phys.f);
    Vec3 bv_b = polopt::fictitious_field(ib, circ, axis_ab, phys.alpha_v_si,
                                         phys.g_f, phys.f);
    if (plan.beam_c_enabled) {
      const double circ_c = std::sin(2.0 * plan.beam_c_theta_rad);
      const Vec3 bc = polopt::fictitious_field(
          plan.beam_c_intensity_w_cm2 * k::w_cm2_to_w_m2, circ_c,
          normalized(plan.beam_c_direction), phys.alpha_v_si, phys.g_f, phys.f);
      bv_a += bc;
      bv_b += bc;
    }
    return norm(phys.bias_g + bv_a) - norm(phys.bias_g + bv_b) +
           phys.background_delta_b_g;
  };

  std::vector<std::vector<double>> dphi(na, std::vector<double>(ni));
  std::vector<std::vector<double>> u_dphi(na, std::vector<double>(ni));
  std::vector<std::vector<double>> truth(na, std::vector<double>(ni));
  run_jobs(na * ni, phys.jobs, [&](int idx) {
    const int j = idx / ni, i = idx % ni;
    const double db = model_db(j, i);
    truth[j][i] = db;
    const auto m = measure_phase(db, plan.interrogation_s, phys,
                                 rng::fnv1a("null.point") + 104729ull * j + 31ull * i);
    dphi[j][i] = m.dphi;
    u_dphi[j][i] = m.u;
  });

  const auto bg = measure_phase(phys.background_delta_b_g, plan.interrogation_s,
                                phys, rng::fnv1a("null.background"));
  const double bg_signed =
      (phys.background_delta_b_g < 0 ? -1.0 : 1.0) * bg.dphi;

  NullingResult res;
  res.dphi_background = bg_signed;
  res.per_angle.resize(na);

  // anchor the sign at the largest |dI| point using the configured geometry
  std::size_t anchor = 0;
  double max_di = -1;
  for (int i = 0; i < ni; ++i) {
    const double adi = std::abs(plan.dp_prime_fracs[i]);
    if (adi > max_di) { max_di = adi; anchor = i; }
  }

  std::vector<double> di_w_cm2(ni);
  for (int i = 0; i < ni; ++i) {
    di_w_cm2[i] = plan.p_a * plan.dp_prime_fracs[i] * plan.power_a;
  }

  res.point_di_over_i.assign(na, std::vector<double>(ni));
  res.point_db_g.assign(na, std::vector<double>(ni));
  res.point_u_db_g.assign(na, std::vector<double>(ni));

  std::vector<double> slopes(na), u_slopes(na), intercepts(na), u_intercepts(na);
  for (int j = 0; j < na; ++j) {
    const int anchor_sign = truth[j][anchor] >= 0 ? +1 : -1;
    const auto signed_phi = restore_signs(dphi[j], anchor, anchor_sign);
    std::vector<double> db(ni), u_db(ni);
    for (int i = 0; i < ni; ++i) {
      db[i] = (signed_phi[i] - bg_signed) / gamma_t;
      u_db[i] = std::hypot(u_dphi[j][i], bg.u) / gamma_t;
      res.point_di_over_i[j][i] = plan.dp_prime_fracs[i];
      res.point_db_g[j][i] = db[i];
      res.point_u_db_g[j][i] = u_db[i];
    }
    const auto lf = fitting::fit_line(di_w_cm2, db, u_db);
    AngleRegression& ar = res.per_angle[j];
    ar.qwp_angle_rad = angles[j];
    ar.slope_g_per_w_cm2 = lf.slope;
    ar.u_slope = lf.u_slope;
    ar.intercept_g = lf.intercept;
    ar.u_intercept = lf.u_intercept;
    ar.chi2 = lf.chi2;
    ar.dof = lf.dof;
    if (lf.dof > 0 && lf.chi2 / lf.dof > 4.0) res.chi2_warning = true;
    slopes[j] = lf.slope;
    u_slopes[j] = lf.u_slope;
    intercepts[j] = lf.intercept;
    u_intercepts[j] = lf.u_intercept;
  }

  // common-intersection check: all lines should meet at dI = 0
  {
    double wsum = 0, mean = 0;
    for (int j = 0; j < na; ++j) {
      const double w = u_intercepts[j] > 0 ? 1.0 / (u_intercepts[j] * u_intercepts[j]) : 1.0;
      wsum += w;
      mean += w * intercepts[j];
    }
    mean /= wsum;
    double var = 0;
    for (int j = 0; j < na; ++j) var += (intercepts[j] - mean) * (intercepts[j] - mean);
    res.intersection_spread_g = std::sqrt(var / na);
  }

  // slope vs QWP angle regression: root is the nulling angle
  const auto tf = fitting::fit_line(angles, slopes, u_slopes);
  res.theta_slope = tf.slope;
  res.u_theta_slope = tf.u_slope;
  res.theta_null_rad = -tf.intercept / tf.slope;
  {
    const double b = tf.intercept, m = tf.slope;
    const double var = (tf.u_intercept * tf.u_intercept) / (m * m) +
                       (b * b * tf.u_slope * tf.u_slope) / (m * m * m * m) -
                       2.0 * b * tf.cov_si / (m * m * m);
    res.u_theta_null_rad = var > 0 ? std::sqrt(var) : 0.0;
  }

  const double alpha_v_hz = std::abs(tf.slope) * gamma_g / (4.0 * k::pi);
  res.alpha_v_hz_cm2 = alpha_v_hz;
  res.alpha_v_si = alpha_v_hz * k::w_m2_to_w_cm2 * 4.0 * k::speed_of_light *
                   k::epsilon0 * phys.f * k::planck;
  res.u_alpha_v_si = res.alpha_v_si * (tf.slope != 0 ? tf.u_slope / std::abs(tf.slope) : 0);

  int jmin = 0;
  for (int j = 1; j < na; ++j) {
    if (std::abs(slopes[j]) < std::abs(slopes[jmin])) jmin = j;
  }
  res.min_slope_g_per_w_cm2 = slopes[jmin];
  res.u_min_slope = u_slopes[jmin];
  res.min_slope_angle_rad = angles[jmin];
  res.suppression_ratio = suppression_ratio(slopes[jmin], tf.slope);
  if (slopes[jmin] != 0.0) {
    res.u_suppression_ratio =
        res.suppression_ratio *
        std::sqrt((u_slopes[jmin] * u_slopes[jmin]) /
                      (slopes[jmin] * slopes[jmin]) +
                  (tf.u_slope * tf.u_slope) / (tf.slope * tf.slope));
  }
  res.alt_suppression_2dtheta = 2.0 * std::abs(angles[jmin] - res.theta_null_rad);

  double span = 0;
  for (int j = 0; j < na; ++j) {
    span = std::max(span, std::abs(angles[j] - res.theta_null_rad));
  }
  if (span > 0.05) res.angle_window_warning = true;

  return res;
}

std::string nulling_to_json(const NullingResult& r) {
  std::ostringstream os;
  os << "{\n  \"per_angle\": [\n";
  char buf[512];
  for (std::size_t j = 0; j < r.per_angle.size(); ++j) {
    const auto& a = r.per_angle[j];
    std::snprintf(buf, sizeof(buf),
                  "    {\"qwp_angle_rad\": %.17g, \"slope_g_per_w_cm2\": %.17g, "
                  "\"u_slope\": %.17g, \"intercept_g\": %.17g, \"u_intercept\": %.17g, "
                  "\"chi2\": %.17g, \"dof\": %d}%s\n",
                  a.qwp_angle_rad, a.slope_g_per_w_cm2, a.u_slope, a.intercept_g,
                  a.u_intercept, a.chi2, a.dof,
                  j + 1 < r.per_angle.size() ? "," : "");
    os << buf;
  }
  os << "  ],\n";
  std::snprintf(buf, sizeof(buf),
                "  \"theta_slope_g_per_w_cm2_rad\": %.17g,\n"
                "  \"u_theta_slope\": %.17g,\n"
                "  \"alpha_v_si\": %.17g,\n"
                "  \"u_alpha_v_si\": %.17g,\n"
                "  \"alpha_v_hz_cm2\": %.17g,\n"
                "  \"theta_null_rad\": %.17g,\n"
                "  \"u_theta_null_rad\": %.17g,\n",
                r.theta_slope, r.u_theta_slope, r.alpha_v_si, r.u_alpha_v_si,
                r.alpha_v_hz_cm2, r.theta_null_rad, r.u_theta_null_rad);
  os << buf;
  std::snprintf(buf, sizeof(buf),
                "  \"min_slope_g_per_w_cm2\": %.17g,\n"
                "  \"u_min_slope\": %.17g,\n"
                "  \"min_slope_angle_rad\": %.17g,\n"
                "  \"suppression_ratio\": %.17g,\n"
                "  \"u_suppression_ratio\": %.17g,\n"
                "  \"alt_suppression_2dtheta\": %.17g,\n"
                "  \"intersection_spread_g\": %.17g,\n"
                "  \"dphi_background_rad\": %.17g,\n"
                "  \"chi2_warning\": %s,\n"
                "  \"angle_window_warning\": %s\n}\n",
                r.min_slope_g_per_w_cm2, r.u_min_slope, r.min_slope_angle_rad,
                r.suppression_ratio, r.u_suppression_ratio,
                r.alt_suppression_2dtheta, r.intersection_spread_g,
                r.dphi_background, r.chi2_warning ? "true" : "false",
                r.angle_window_warning ? "true" : "false");
  os << buf;
  return os.str();
}

void write_delayed_drop_csv(std::ostream& out, const DelayedDropResult& r) {
  out << "qwp_angle_rad,delta_b_g,u_delta_b_g,gradient_g_per_cm\n";
  char buf[256];
  for (std::size_t j = 0; j < r.qwp_angles_rad.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n",
                  r.qwp_angles_rad[j], r.delta_b_g[j], r.u_delta_b_g[j],
                  r.gradient_g_per_cm[j]);
    out << buf;
  }
}

void write_nulling_points_csv(std::ostream& out,
                              const std::vector<double>& angles,
                              const std::vector<std::vector<double>>& di_over_i,
                              const std::vector<std::vector<double>>& db,
                              const std::vector<std::vector<double>>& u_db) {
  out << "qwp_angle_rad,di_over_i,delta_b_vls_g,u_delta_b_vls_g\n";
  char buf[256];
  for (std::size_t j = 0; j < angles.size(); ++j) {
    for (std::size_t i = 0; i < di_over_i[j].size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", angles[j],
                    di_over_i[j][i], db[j][i], u_db[j][i]);
      out << buf;
    }
  }
}

void write_nulling_slopes_csv(std::ostream& out, const NullingResult& r) {
  out << "qwp_angle_rad,slope_g_per_w_cm2,u_slope\n";
  char buf[256];
  for (const auto& a : r.per_angle) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", a.qwp_angle_rad,
                  a.slope_g_per_w_cm2, a.u_slope);
    out << buf;
  }
}

}  // namespace vls::protocols
