#include "vls/spinmix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "vls/errors.hpp"

namespace vls::spinmix {

namespace k = vls::constants;

double magnetization(const SpinorState& s) { return s.rho_p1 - s.rho_m1; }

SpinorState initial_after_pi2() {
  SpinorState s;
  s.rho_m1 = 0.25;
  s.rho_0 = 0.5;
  s.rho_p1 = 0.25;
  s.theta_s = k::pi;
  return s;
}

double SpinMixParams::q_from_bias(double b0_g) {
  return k::two_pi * k::rb87::qz_hz_per_g2 * b0_g * b0_g;
}

double SpinMixParams::c_from_density(double c2_j_m3, double density_m3) {
  return c2_j_m3 * density_m3 / k::hbar;
}

namespace {

struct Dyn {
  double rho0, theta, yp, vp, ym, vm;
};

double overlap_of(double dy, double r_tf) {
  const double s2 = 4.0 * r_tf * r_tf / 5.0;  // Gaussian-equivalent TF width
  return std::exp(-dy * dy / s2);
}

Dyn deriv(const Dyn& s, double m, const SpinMixParams& p, double accel) {
  const double lam = overlap_of(s.yp - s.ym, p.r_tf_m);
  const double ce = p.c * lam;
  const double one_m = 1.0 - s.rho0;
  const double x = std::max(one_m * one_m - m * m, 0.0);
  const double sx = std::sqrt(x);

  Dyn d{};
  d.rho0 = 2.0 * ce * s.rho0 * sx * std::sin(s.theta);
  double cos_term = 0.0;
  if (sx > 1e-12) {
    cos_term = (one_m * (1.0 - 2.0 * s.rho0) - m * m) / sx * std::cos(s.theta);
  }
  d.theta = -2.0 * p.q + 2.0 * ce * ((1.0 - 2.0 * s.rho0) + cos_term);
  // centroids: driven, damped harmonic motion; force -/+ on mF = +/-1
  const double w = p.omega_sep, z = p.damping_zeta;
  d.yp = s.vp;
  d.vp = -w * w * s.yp - 2.0 * z * w * s.vp - accel;
  d.ym = s.vm;
  d.vm = -w * w * s.ym - 2.0 * z * w * s.vm + accel;
  return d;
}

Dyn axpy(const Dyn& a, double h, const Dyn& b) {
  return {a.rho0 + h * b.rho0, a.theta + h * b.theta, a.yp + h * b.yp,
          a.vp + h * b.vp,     a.ym + h * b.ym,       a.vm + h * b.vm};
}

}  // namespace

double sma_energy(const SpinorState& s, const SpinMixParams& p, double overlap) {
  const double m = magnetization(s);
  const double one_m = 1.0 - s.rho_0;
  const double x = std::max(one_m * one_m - m * m, 0.0);
  return p.q * one_m + p.c * overlap * s.rho_0 *
                           (one_m + std::sqrt(x) * std::cos(s.theta_s));
}

std::vector<TrajectoryPoint> evolve_sma(const SpinorState& initial,
                                        const SpinMixParams& params,
                                        double t_max_s, double dt_out_s,
                                        double dt_s) {
  if (initial.rho_m1 < 0 || initial.rho_0 < 0 || initial.rho_p1 < 0 ||
      std::abs(initial.total() - 1.0) > 1e-9) {
    throw std::invalid_argument("evolve_sma: populations must be >= 0 and sum to 1");
  }
  if (params.q < 0) {
    throw std::invalid_argument("evolve_sma: q must be >= 0");
  }
  const double m = magnetization(initial);
  double tmin = k::two_pi / std::max(params.q, 1e-12);
  if (params.c != 0.0) tmin = std::min(tmin, k::two_pi / std::abs(params.c));
  if (dt_s <= 0.0) dt_s = tmin / 2000.0;
  if (dt_s > tmin / 50.0) {
    throw std::invalid_argument("evolve_sma: dt does not resolve the dynamics");
  }
  dt_out_s = std::max(dt_out_s, dt_s);

  const double accel = k::bohr_magneton * std::abs(params.g_f) *
                       params.gradient_g_per_cm * k::g_cm_to_t_m / params.mass_kg;

  Dyn s{initial.rho_0, initial.theta_s, initial.y_p1,
        initial.v_p1,  initial.y_m1,    initial.v_m1};

  auto snapshot = [&](double t) {
    TrajectoryPoint pt;
    pt.t = t;
    pt.state.rho_0 = s.rho0;
    pt.state.rho_p1 = 0.5 * (1.0 - s.rho0 + m);
    pt.state.rho_m1 = 0.5 * (1.0 - s.rho0 - m);
    pt.state.theta_s = s.theta;
    pt.state.y_p1 = s.yp;
    pt.state.y_m1 = s.ym;
    pt.state.v_p1 = s.vp;
    pt.state.v_m1 = s.vm;
    pt.overlap = overlap_of(s.yp - s.ym, params.r_tf_m);
    pt.energy = sma_energy(pt.state, params, pt.overlap);
    return pt;
  };

  std::vector<TrajectoryPoint> traj;
  traj.reserve(static_cast<std::size_t>(t_max_s / dt_out_s) + 2);
  traj.push_back(snapshot(0.0));

  double t = 0.0, next_out = dt_out_s;
  const long nsteps = std::lround(std::ceil(t_max_s / dt_s));
  const double h = t_max_s / nsteps;
  for (long i = 0; i < nsteps; ++i) {
    const Dyn k1 = deriv(s, m, params, accel);
    const Dyn k2 = deriv(axpy(s, 0.5 * h, k1), m, params, accel);
    const Dyn k3 = deriv(axpy(s, 0.5 * h, k2), m, params, accel);
    const Dyn k4 = deriv(axpy(s, h, k3), m, params, accel);
    s.rho0 += h / 6.0 * (k1.rho0 + 2 * k2.rho0 + 2 * k3.rho0 + k4.rho0);
    s.theta += h / 6.0 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta);
    s.yp += h / 6.0 * (k1.yp + 2 * k2.yp + 2 * k3.yp + k4.yp);
    s.vp += h / 6.0 * (k1.vp + 2 * k2.vp + 2 * k3.vp + k4.vp);
    s.ym += h / 6.0 * (k1.ym + 2 * k2.ym + 2 * k3.ym + k4.ym);
    s.vm += h / 6.0 * (k1.vm + 2 * k2.vm + 2 * k3.vm + k4.vm);
    s.rho0 = std::clamp(s.rho0, 0.0, 1.0 - std::abs(m));
    t = (i + 1) * h;
    if (!std::isfinite(s.rho0) || !std::isfinite(s.theta)) {
      throw NumericalError("evolve_sma: step failure (non-finite state)");
    }
    if (t + 1e-15 >= next_out || i + 1 == nsteps) {
      traj.push_back(snapshot(t));
      next_out += dt_out_s;
    }
  }
  return traj;
}

std::vector<CentroidPoint> component_separation(const SpinMixParams& params,
                                                double t_max_s, double dt_out_s) {
  SpinorState idle = initial_after_pi2();
  SpinMixParams p = params;
  p.c = 0.0;  // spin dynamics irrelevant for the centroid trace
  const auto traj = evolve_sma(idle, p, t_max_s, dt_out_s);
  std::vector<CentroidPoint> out;
  out.reserve(traj.size());
  for (const auto& pt : traj) {
    out.push_back({pt.t, pt.state.y_p1, pt.state.y_m1, pt.state.v_p1,
                   pt.state.v_m1, pt.overlap});
  }
  return out;
}

void write_trajectory_csv(std::ostream& out,
                          const std::vector<TrajectoryPoint>& traj) {
  out << "t_s,rho_m1,rho_0,rho_p1,y_m1_m,y_p1_m,lambda\n";
  char buf[256];
  for (const auto& p : traj) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  p.t, p.state.rho_m1, p.state.rho_0, p.state.rho_p1,
                  p.state.y_m1, p.state.y_p1, p.overlap);
    out << buf;
  }
}

double oscillation_amplitude(const std::vector<TrajectoryPoint>& traj,
                             double t_from, double t_to) {
  double lo = 1.0, hi = 0.0;
  for (const auto& p : traj) {
    if (p.t < t_from || p.t > t_to) continue;
    lo = std::min(lo, p.state.rho_0);
    hi = std::max(hi, p.state.rho_0);
  }
  return hi > lo ? 0.5 * (hi - lo) : 0.0;
}

int count_oscillation_periods(const std::vector<TrajectoryPoint>& traj,
                              double t_from, double t_to) {
  // count interior maxima above the midline
  double lo = 1.0, hi = 0.0;
  for (const auto& p : traj) {
    if (p.t < t_from || p.t > t_to) continue;
    lo = std::min(lo, p.state.rho_0);
    hi = std::max(hi, p.state.rho_0);
  }
  const double mid = 0.5 * (lo + hi);
  int peaks = 0;
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    if (traj[i].t < t_from || traj[i].t > t_to) continue;
    const double a = traj[i - 1].state.rho_0, b = traj[i].state.rho_0,
                 c = traj[i + 1].state.rho_0;
    if (b > a && b >= c && b > mid) ++peaks;
  }
  return peaks;
}

}  // namespace vls::spinmix
