// Gaussian-beam intensities, dipole-potential minimum under gravity,
// fictitious-field maps and VLS Zeeman shifts.
#pragma once

#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "vls/geometry.hpp"
#include "vls/polopt.hpp"

namespace vls::trapfield {

struct GaussianBeam {
  double power_w = 0.0;
  double waist_m = 0.0;           // 1/e^2 intensity radius at focus
  double wavelength_m = 1064e-9;
  Vec3 direction{0, 0, 1};        // unit propagation vector
  Vec3 focus{0, 0, 0};
  polopt::PolarizationState polarization{};
  double freq_offset_hz = 0.0;    // bookkeeping only (AOM tone)

  void validate() const;
  double rayleigh_range() const;
  double peak_intensity() const;  // 2P/(pi w0^2), W/m^2
};

struct MagneticEnvironment {
  Vec3 bias_g{0, 0, 0};               // gauss
  double gradient_g_per_cm = 0.0;     // uniform |B| gradient magnitude
  Vec3 gradient_axis{0, 0, 1};

  // |B| at r including the ambient gradient term
  double magnitude_at(const Vec3& r_m) const;
};

struct TrapSite {
  Vec3 position;
  std::vector<double> intensity_per_beam;  // W/m^2
  double intensity_total = 0.0;
  Vec3 b_vls_g;
};

// local intensity of one beam, W/m^2 (Rayleigh-range divergence included)
double intensity_at(const GaussianBeam& beam, const Vec3& r);

// Trap minimum along the gravity line through the first beam's focus.
// alpha_scalar in SI; gravity is the acceleration vector (e.g. {0,-9.81,0}).
// Throws NoBoundMinimumError when the dipole force cannot hold the atoms.
// Position tolerance 10 nm.
Vec3 trap_minimum(std::span<const GaussianBeam> beams, double alpha_scalar_si,
                  double mass_kg, const Vec3& gravity);

// dipole potential energy of the combined beams at r, joule
double dipole_potential(std::span<const GaussianBeam> beams,
                        double alpha_scalar_si, const Vec3& r);

// vector sum of per-beam fictitious fields (gauss) at a position
using FieldMap = std::function<Vec3(const Vec3&)>;
FieldMap vls_field_map(std::vector<GaussianBeam> beams, double alpha_v_si,
                       double g_f, double f);

TrapSite evaluate_site(std::span<const GaussianBeam> beams, const Vec3& r,
                       double alpha_v_si, double g_f, double f);

// VLS Zeeman shift of |F, mF> for intensity i0 (W/m^2), ellipticity theta,
// and angle nu between the bias field and the fictitious field.
// exact:  mu_B gF mF (|B0 + Bvls| - |B0|)
// approx: first-order term of the expansion (the conventional VLS form)
struct ZeemanShift {
  double exact_h_hz = 0.0;   // energy in units of h, i.e. Hz
  double approx_h_hz = 0.0;
};
ZeemanShift vls_zeeman_shift(double i0_w_m2, double theta, double nu,
                             int m_f, double f, double alpha_v_si,
                             double g_f, double b0_g);

// T = 2pi / (2 r_TF gamma B'); returns +inf when the gradient vanishes
double dephasing_time_s(double r_tf_m, double gradient_g_per_cm, double g_f);

// curvature -> trap frequency helper: omega = sqrt(V''/m) along axis at r
double trap_frequency_at(std::span<const GaussianBeam> beams,
                         double alpha_scalar_si, double mass_kg,
                         const Vec3& r, const Vec3& axis);

// CSV grid export: x,y,z,Bx,By,Bz,Bmag (SI positions, gauss fields)
void export_field_csv(std::ostream& out, const FieldMap& field,
                      const Vec3& lo, const Vec3& hi, int nx, int ny, int nz);

}  // namespace vls::trapfield
