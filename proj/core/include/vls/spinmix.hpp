// Single-mode spin-1 mixing dynamics with quadratic Zeeman shift and
// spin-dependent interaction, coupled to a centroid model of
// gradient-driven component separation and overlap loss.
#pragma once

#include <ostream>
#include <vector>

#include "vls/constants.hpp"

namespace vls::spinmix {

struct SpinorState {
  double rho_m1 = 0.0, rho_0 = 0.0, rho_p1 = 0.0;
  double theta_s = 0.0;           // relative spinor phase th+ + th- - 2 th0
  double y_m1 = 0.0, y_0 = 0.0, y_p1 = 0.0;  // centroids, m
  double v_m1 = 0.0, v_p1 = 0.0;             // centroid velocities, m/s

  double total() const { return rho_m1 + rho_0 + rho_p1; }
};

double magnetization(const SpinorState& s);

// (0.25, 0.5, 0.25) with theta_s = pi: an rf pi/2 rotation about x applied
// to |F=1, mF=-1> (the phase follows from that rotation convention)
SpinorState initial_after_pi2();

struct SpinMixParams {
  double q = constants::two_pi * 10.0;        // quadratic Zeeman, rad/s
  double c = -constants::two_pi * 3.2;        // c2 <n>, rad/s
  double gradient_g_per_cm = 0.0;             // |grad B| along the separation axis
  double omega_sep = constants::two_pi * 9.0; // centroid trap frequency, rad/s
  double damping_zeta = 1.0;                  // centroid damping ratio
  double r_tf_m = 13e-6;                      // Thomas-Fermi radius
  double mass_kg = constants::rb87::mass;
  double g_f = constants::rb87::g_f;

  // q from the quadratic Zeeman coefficient at this bias
  static double q_from_bias(double b0_g);
  // c = c2 <n> / hbar for a mean density (m^-3)
  static double c_from_density(double c2_j_m3, double density_m3);
};

struct TrajectoryPoint {
  double t = 0.0;
  SpinorState state;
  double overlap = 1.0;   // lambda(t)
  double energy = 0.0;    // H(rho0, theta; m, q, c_eff), rad/s
};

// Symplectic-grade fixed-step RK4 on (rho0, theta_s) plus the centroid
// pair; magnetization is an invariant of the formulation and is not
// evolved. dt must resolve min(2pi/q, 2pi/|c|)/50 or better.
std::vector<TrajectoryPoint> evolve_sma(const SpinorState& initial,
                                        const SpinMixParams& params,
                                        double t_max_s, double dt_out_s,
                                        double dt_s = 0.0);

struct CentroidPoint {
  double t = 0.0;
  double y_p1 = 0.0, y_m1 = 0.0;
  double v_p1 = 0.0, v_m1 = 0.0;
  double overlap = 1.0;
};

// centroid/overlap model alone (driven, damped harmonic motion)
std::vector<CentroidPoint> component_separation(const SpinMixParams& params,
                                                double t_max_s, double dt_out_s);

// single-mode energy functional; overlap scales the interaction term
double sma_energy(const SpinorState& s, const SpinMixParams& p, double overlap);

// CSV: t,rho_m1,rho_0,rho_p1,y_m1,y_p1,lambda
void write_trajectory_csv(std::ostream& out,
                          const std::vector<TrajectoryPoint>& traj);

// peak-to-peak/2 of rho0 over [t_from, t_to]
double oscillation_amplitude(const std::vector<TrajectoryPoint>& traj,
                             double t_from, double t_to);
// count of interior local maxima of rho0 (simple peak detection)
int count_oscillation_periods(const std::vector<TrajectoryPoint>& traj,
                              double t_from, double t_to);

}  // namespace vls::spinmix
