// Differential Ramsey shot-pair simulation with common-mode phase noise,
// quadratic-Zeeman contrast, and extraction of the differential phase by
// conic-constrained ellipse fitting.
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vls/errors.hpp"

namespace vls::ramsey {

enum class NoiseDistribution { uniform, gaussian };

struct RamseyConfig {
  double interrogation_s = 0.015;
  std::vector<double> pulse_phases;        // second pi/2-pulse phases, rad
  double contrast_a = 0.8;
  double contrast_b = 0.8;
  NoiseDistribution noise = NoiseDistribution::uniform;
  double noise_rms_rad = 0.0;              // used for the gaussian option
  double delta_b_g = 0.0;                  // field difference, gauss
  double b0_g = 0.0;                       // bias magnitude (contrast model)
  double readout_sigma = 0.0;              // additive F_z noise per shot
  double g_f = -0.5;
  std::uint64_t seed = 0;

  void validate() const;
  // n phases evenly covering [0, 2pi)
  static std::vector<double> phase_grid(int n);
};

struct ShotRecord {
  double pulse_phase = 0.0;
  double fza = 0.0;
  double fzb = 0.0;
  double common_phase = 0.0;  // realized psi, kept for oracle tests
};

// F_{z,A} = c_A cos(psi - phi), F_{z,B} = c_B cos(psi - phi + dphi),
// dphi = gamma |dB| T (signed by dB). Deterministic given (config, seed).
std::vector<ShotRecord> simulate_shots(const RamseyConfig& cfg);

// |cos(q_Z B0^2 T)| contrast factor from the quadratic Zeeman shift
double qz_contrast(double t_s, double b0_g);
// interrogation time of the contrast maximum nearest t_s for this bias
double qz_nearest_contrast_max_s(double t_s, double b0_g);

struct EllipseFitOptions {
  bool sampson_refine = true;   // gradient-weighted refinement passes
  int refine_iterations = 8;
  int bootstrap_samples = 64;   // for u(delta_phi); 0 disables
  std::uint64_t seed = 0x5eed;  // bootstrap substream
};

struct EllipseFitResult {
  // A x^2 + B xy + C y^2 + D x + E y + F = 0, scaled so |(A,B,C)| = 1,
  // sign fixed by A + C > 0
  std::array<double, 6> conic{};
  double delta_phi = 0.0;       // |dphi| in [0, pi]
  double u_delta_phi = 0.0;
  double discriminant = 0.0;    // B^2 - 4AC (< 0 for an ellipse)
  double scatter_condition = 0.0;
  int n_points = 0;
  bool near_degenerate = false; // |cos dphi| within 1e-6 of 1
};

struct Point2 {
  double x = 0.0, y = 0.0;
};

// Direct conic-constrained least squares (generalized eigenproblem on the
// block-decomposed scatter matrix), points centered and scaled to unit RMS
// first, optionally refined by Sampson-distance reweighting. Result is
// invariant to point order. Throws DegenerateFitError for < 6 points,
// collinear input, or a non-ellipse conic.
EllipseFitResult ellipse_fit(std::span<const Point2> points,
                             const EllipseFitOptions& opts = {});

// |dphi| = arccos(-B / 2 sqrt(AC)); requires an ellipse conic with AC > 0.
// Throws DegenerateFitError when |cos dphi| >= 1 (phase indeterminate).
double phase_from_conic(const std::array<double, 6>& conic);

// shots CSV: header `pulse_phase_rad,fza,fzb`
void write_shots_csv(std::ostream& out, std::span<const ShotRecord> shots);
std::vector<Point2> read_shots_csv(std::istream& in);

// fit JSON record (conic, phase, uncertainty, diagnostics)
std::string fit_to_json(const EllipseFitResult& r);

}  // namespace vls::ramsey
