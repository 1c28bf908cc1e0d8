// The two measurement pipelines: the delayed-drop scan across a single
// beam, and the in-trap nulling pipeline (rf-power balancing, dB/dI double
// regression, nulling angle, suppression ratio). Both run closed-loop
// through the Ramsey simulation and ellipse reduction.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vls/fitting.hpp"
#include "vls/geometry.hpp"
#include "vls/ramsey.hpp"
#include "vls/trapfield.hpp"

namespace vls::protocols {

// shared physics inputs for the forward models
struct PhysicsConfig {
  double alpha_v_si = 0.0;       // reduced vector polarizability, C m^2/V
  double g_f = -0.5;
  double f = 1.0;
  double cell_phi_k = 0.0;       // cell retardance, rad
  double cell_theta_k = 0.0;     // cell fast axis, rad
  double qwp_zero_rad = 0.0;     // QWP mount zero offset (lab angle at
                                 // which the effective theta is zero)
  Vec3 bias_g{0, 0, 0};          // bias field, gauss
  double background_delta_b_g = 0.0;  // ambient field difference A-B
  int shots = 200;
  double contrast_a = 0.8;
  double contrast_b = 0.8;
  double readout_sigma = 0.02;
  ramsey::EllipseFitOptions fit{};
  std::uint64_t seed = 1;
  int jobs = 1;                  // parallel fan-out over (angle, point) jobs
};

double freefall_separation_m(double t_delay_s);

// dB = (dphi - dphi_bg) / (gamma T), gauss; gamma from |g_F|
double delta_b_from_phase_g(double dphi, double dphi_bg, double t_s,
                            double g_f = -0.5);

struct DelayedDropPlan {
  trapfield::GaussianBeam probe_beam;   // beam C, the one left on
  double drop_delay_a_s = 2.915e-3;     // BEC_A released this long before B
  double drop_delay_b_s = 0.0;
  double interrogation_s = 250e-6;
  std::vector<double> qwp_angles_rad;   // lab QWP schedule
  double initial_offset_m = 0.0;        // cloud B start below the beam axis
  int anchor_sign = +1;                 // sign of dB at the largest |dB| point
  std::vector<Vec3> bias_set_g;         // >= 3 directions for the direction scan

  void validate() const;
};

struct DelayedDropResult {
  std::vector<double> qwp_angles_rad;
  std::vector<double> delta_b_g;        // sign-restored, background-subtracted
  std::vector<double> u_delta_b_g;
  std::vector<double> gradient_g_per_cm;  // per point, dB / dy
  double separation_m = 0.0;
  fitting::Sin2Fit fit;                  // dB = A sin 2(theta - theta_N) + c
  double peak_gradient_g_per_cm = 0.0;   // |A| / dy
  double u_peak_gradient_g_per_cm = 0.0;
  double dphi_background = 0.0;
};

DelayedDropResult delayed_drop_scan(const DelayedDropPlan& plan,
                                    const PhysicsConfig& phys);

// Direction and magnitude of B_vls from measurements under >= 3 bias
// directions: solves dB_i = dB_vls (bhat_i . uhat) in least squares.
struct DirectionFit {
  Vec3 unit;          // uhat, |uhat| = 1
  double magnitude;   // dB_vls >= 0, gauss
};
DirectionFit infer_vls_direction(std::span<const Vec3> bias_directions,
                                 std::span<const double> delta_b_g);

// End-to-end direction determination: repeats one delayed-drop measurement
// (at the schedule angle of largest circularity) under each bias direction
// of the plan's bias set and solves for the fictitious-field axis. Signs
// come from the configured geometry, as in the scan itself.
struct DirectionScanResult {
  DirectionFit fit;
  std::vector<double> delta_b_g;   // signed measurement per bias
};
DirectionScanResult delayed_drop_direction(const DelayedDropPlan& plan,
                                           const PhysicsConfig& phys);

// rf power offset that balances the intensities: (p_B/p_A) P_B - P_A
double balance_offset(double p_a, double p_b, double power_a, double power_b);

// normalized intensity difference for an offset rf power dP':
// dI/I_A = dP'/P_A; absolute dI = p_A dP'
double normalized_intensity(double dp_prime, double power_a);

struct InTrapPlan {
  double p_a = 1.0;           // intensity per rf power, (W/cm^2)/unit
  double p_b = 1.0;
  double power_a = 1.0;       // rf powers, arbitrary units
  double power_b = 1.0;
  std::vector<double> dp_prime_fracs;    // dP'/P_A schedule
  std::vector<double> qwp_angles_rad;    // lab QWP schedule (>= 3)
  double interrogation_s = 0.015;
  double qwp_quantization_rad = 0.0;     // optional rotation-stage resolution
  bool beam_c_enabled = false;           // crossing-beam perturbation toggle
  double beam_c_intensity_w_cm2 = 0.0;
  double beam_c_theta_rad = 0.0;         // crossing-beam polarization angle
  Vec3 beam_c_direction{1, 0, 0};

  void validate() const;
};

struct AngleRegression {
  double qwp_angle_rad = 0.0;   // realized (possibly quantized) angle
  double slope_g_per_w_cm2 = 0.0;
  double u_slope = 0.0;
  double intercept_g = 0.0;     // dB at dI = 0
  double u_intercept = 0.0;
  double chi2 = 0.0;
  int dof = 0;
};

struct NullingResult {
  std::vector<AngleRegression> per_angle;
  // theta regression: slope = (4 pi / gamma) alpha_V (theta - theta_N)
  double theta_slope = 0.0;           // G/(W/cm^2) per rad
  double u_theta_slope = 0.0;
  double alpha_v_si = 0.0;            // imputed polarizability
  double u_alpha_v_si = 0.0;
  double alpha_v_hz_cm2 = 0.0;        // same, as h x Hz W^-1 cm^2
  double theta_null_rad = 0.0;
  double u_theta_null_rad = 0.0;
  double min_slope_g_per_w_cm2 = 0.0; // at the scheduled angle nearest theta_N
  double u_min_slope = 0.0;
  double min_slope_angle_rad = 0.0;
  double suppression_ratio = 0.0;
  double u_suppression_ratio = 0.0;
  double alt_suppression_2dtheta = 0.0;  // 2 |theta_min - theta_N|
  double intersection_spread_g = 0.0;    // scatter of dI=0 intercepts
  double dphi_background = 0.0;
  bool chi2_warning = false;
  bool angle_window_warning = false;   // schedule beyond small-angle validity
  std::string notes;
  // per-(angle, point) reduced data for the points-table CSV
  std::vector<std::vector<double>> point_di_over_i;
  std::vector<std::vector<double>> point_db_g;
  std::vector<std::vector<double>> point_u_db_g;
};

NullingResult nulling_pipeline(const InTrapPlan& plan, const PhysicsConfig& phys);

// (dB/dI)_max = |theta_slope|/2 per rad; ratio = |min_slope| / (dB/dI)_max
double suppression_ratio(double min_slope, double theta_slope);

// Continuity-based sign restoration for ellipse-folded |dphi| series.
// Walks from the anchor index outward, choosing the sign that minimizes
// jumps; the anchor sign comes from the configured geometry.
std::vector<double> restore_signs(std::span<const double> folded,
                                  std::size_t anchor_index, int anchor_sign);

std::string nulling_to_json(const NullingResult& r);
void write_delayed_drop_csv(std::ostream& out, const DelayedDropResult& r);
void write_nulling_points_csv(std::ostream& out,
                              const std::vector<double>& angles,
                              const std::vector<std::vector<double>>& di_over_i,
                              const std::vector<std::vector<double>>& db,
                              const std::vector<std::vector<double>>& u_db);
void write_nulling_slopes_csv(std::ostream& out, const NullingResult& r);

}  // namespace vls::protocols
