// Angular-momentum coefficients and reduced scalar/vector polarizabilities
// of a ground hyperfine level, with unit conversions between SI, cgs and
// atomic units. Fine-structure line data is data-driven; a Rb87 D1/D2
// table ships with the toolkit.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "vls/constants.hpp"
#include "vls/errors.hpp"

namespace vls::atomprops {

// half-integer angular momentum stored as twice its value
struct HalfInt {
  int twice = 0;

  constexpr HalfInt() = default;
  constexpr explicit HalfInt(int twice_value) : twice(twice_value) {}
  double value() const { return 0.5 * twice; }

  // validates that x is a half-integer to 1e-9
  static HalfInt from(double x);
};

// Exact Racah evaluation, done in exact rational arithmetic over big
// integers and converted to double at the end. Returns 0 for triangle
// violations (that is a value, not an error). Throws std::invalid_argument
// for negative or non-half-integer input.
double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3,
                HalfInt j4, HalfInt j5, HalfInt j6);
double wigner6j(double j1, double j2, double j3,
                double j4, double j5, double j6);

// one |nJ> -> |n'J'> fine-structure transition
struct FineStructureLine {
  std::string label;        // e.g. "D1"
  HalfInt upper_j;          // J'
  double omega = 0.0;       // transition angular frequency, rad/s
  double gamma = 0.0;       // natural linewidth, rad/s
  double dipole = 0.0;      // |(n'J' || d || nJ)| / sqrt(2J+1), i.e. the
                            // tabulated <J||d||J'> convention, C m
  void validate() const;
};

struct HyperfineLevel {
  HalfInt j, i, f;
  double g_f = 0.0;
  void validate() const;  // |J-I| <= F <= J+I
};

enum class Rank { scalar, vector };

struct Polarizability {
  double value_si = 0.0;   // C m^2 / V
  Rank rank = Rank::scalar;
  std::string provenance;  // species/level/wavelength notes
  bool zero_coupling = false;  // set when a vanishing 6j zeroed the value

  double cgs_cm3() const;      // value / (4 pi eps0) in cm^3
  double atomic_units() const; // value / (4 pi eps0 a0^3)
  static double si_from_cgs_cm3(double cm3);
  static double si_from_atomic_units(double au);
};

// Reduced vector polarizability alpha^(1)_nJ at angular frequency omega:
// dispersive sum over the supplied lines with both rotating and
// counter-rotating terms. Throws NearResonanceError when omega is within
// 10*Gamma of a line center.
Polarizability alpha1_nJ(std::span<const FineStructureLine> lines,
                         HalfInt j, double omega);

// Hyperfine projection alpha^v_nJF: applies the
// (-1)^(J+I+F) sqrt(2F(2F+1)/(F+1)) {F 1 F; J I J} prefactor.
// hf_correction is an optional flat factor (default 1) standing in for
// the ~200 ppm hyperfine-resolved correction that is out of scope.
Polarizability alpha_v_nJF(const Polarizability& alpha1,
                           const HyperfineLevel& level,
                           double hf_correction = 1.0);

// scalar polarizability from the same line set (standard far-detuned sum)
Polarizability alpha_scalar_nJ(std::span<const FineStructureLine> lines,
                               HalfInt j, double omega);

// alpha^v/(4 c eps0 F) expressed as Hz per W/cm^2 (multiply by h for energy)
double vls_per_intensity_hz_cm2(const Polarizability& alpha_v, HalfInt f);

// line table I/O: versioned key-value text format
std::vector<FineStructureLine> parse_line_table(const std::string& text);
std::vector<FineStructureLine> load_line_table(const std::string& path);

// built-in Rb87 D1/D2 table (same content as the shipped data file)
const std::vector<FineStructureLine>& rb87_d_lines();
HyperfineLevel rb87_f1_level();

}  // namespace vls::atomprops
