// Physical constants (CODATA 2018) and unit helpers. SI internally,
// gauss and W/cm^2 only at interfaces that mirror lab conventions.
#pragma once

#include <cmath>

namespace vls::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double planck = 6.62607015e-34;         // J s
inline constexpr double hbar = planck / two_pi;          // J s
inline constexpr double speed_of_light = 2.99792458e8;   // m/s
inline constexpr double epsilon0 = 8.8541878128e-12;     // F/m
inline constexpr double bohr_magneton = 9.2740100783e-24;  // J/T
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double bohr_radius = 0.529177210903e-10;     // m
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
inline constexpr double boltzmann = 1.380649e-23;        // J/K
inline constexpr double standard_gravity = 9.81;         // m/s^2

// e*a0, the atomic unit of electric dipole moment
inline constexpr double ea0 = elementary_charge * bohr_radius;  // C m
// atomic unit of polarizability, e^2 a0^2 / E_h
inline constexpr double polarizability_au = 1.64877727436e-41;  // C m^2/V

inline constexpr double gauss_per_tesla = 1.0e4;
inline constexpr double tesla_per_gauss = 1.0e-4;

// W/cm^2 <-> W/m^2
inline constexpr double w_cm2_to_w_m2 = 1.0e4;
inline constexpr double w_m2_to_w_cm2 = 1.0e-4;

// gradient: G/cm <-> T/m
inline constexpr double g_cm_to_t_m = 1.0e-2;

namespace rb87 {
inline constexpr double mass = 86.909180531 * atomic_mass_unit;  // kg
// nominal F=1 ground-level g-factor; |gamma|/2pi = 0.700 MHz/G follows.
// The real value is -0.5018 (Breit-Rabi corrections are a non-goal).
inline constexpr double g_f = -0.5;
inline constexpr int two_f = 2;   // F = 1
inline constexpr int two_j = 1;   // J = 1/2
inline constexpr int two_i = 3;   // I = 3/2
// quadratic Zeeman coefficient, angular: q_Z = 2pi x 71.89 Hz/G^2
inline constexpr double qz_hz_per_g2 = 71.89;
// spin-dependent interaction coefficient c2 for F=1
inline constexpr double c2 = -2.4e-53;  // J m^3
}  // namespace rb87

// |g_F| mu_B / hbar in rad/s per tesla
inline constexpr double gyromag_rad_s_t(double g_f) {
  return (g_f < 0 ? -g_f : g_f) * bohr_magneton / hbar;
}
// same, rad/s per gauss
inline constexpr double gyromag_rad_s_g(double g_f) {
  return gyromag_rad_s_t(g_f) * tesla_per_gauss;
}

}  // namespace vls::constants
