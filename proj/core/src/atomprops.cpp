#include "vls/atomprops.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

namespace vls::atomprops {

namespace k = vls::constants;

void FineStructureLine::validate() const {
  if (!(omega > 0)) throw ConfigError("line '" + label + "': omega must be > 0");
  if (gamma < 0) throw ConfigError("line '" + label + "': gamma must be >= 0");
  if (dipole < 0) throw ConfigError("line '" + label + "': dipole element must be >= 0");
}

void HyperfineLevel::validate() const {
  if (j.twice < 0 || i.twice < 0 || f.twice < 0) {
    throw ConfigError("hyperfine level: quantum numbers must be >= 0");
  }
  if (f.twice < std::abs(j.twice - i.twice) || f.twice > j.twice + i.twice) {
    throw ConfigError("hyperfine level: F must satisfy |J-I| <= F <= J+I");
  }
}

double Polarizability::cgs_cm3() const {
  return value_si / (4.0 * k::pi * k::epsilon0) * 1e6;
}
double Polarizability::atomic_units() const {
  return value_si / (4.0 * k::pi * k::epsilon0 *
                     k::bohr_radius * k::bohr_radius * k::bohr_radius);
}
double Polarizability::si_from_cgs_cm3(double cm3) {
  return cm3 * 1e-6 * 4.0 * k::pi * k::epsilon0;
}
double Polarizability::si_from_atomic_units(double au) {
  return au * 4.0 * k::pi * k::epsilon0 *
         k::bohr_radius * k::bohr_radius * k::bohr_radius;
}

namespace {

void check_far_detuned(std::span<const FineStructureLine> lines, double omega) {
  for (const auto& ln : lines) {
    if (std::abs(omega - ln.omega) < 10.0 * ln.gamma) {
      throw NearResonanceError("omega within 10 Gamma of line " + ln.label +
                               "; far-off-resonance sum not valid");
    }
  }
}

int parity_sign(int twice_sum) {
  // (-1)^(twice_sum/2); twice_sum must be even for physical phases
  return ((twice_sum / 2) % 2 == 0) ? 1 : -1;
}

}  // namespace

Polarizability alpha1_nJ(std::span<const FineStructureLine> lines,
                         HalfInt j, double omega) {
  check_far_detuned(lines, omega);
  double sum = 0.0;
  for (const auto& ln : lines) {
    ln.validate();
    // reduced element squared in the (2J+1)-weighted convention
    const double d2 = (j.twice + 1) * ln.dipole * ln.dipole;
    const double sixj =
        wigner6j(HalfInt(2), HalfInt(2), HalfInt(2), j, ln.upper_j, j);
    const std::complex<double> rot(ln.omega - omega, -0.5 * ln.gamma);
    const std::complex<double> crot(ln.omega + omega, 0.5 * ln.gamma);
    const double disp = (1.0 / rot - 1.0 / crot).real();
    sum += parity_sign(j.twice + ln.upper_j.twice) * sixj * d2 * disp / k::hbar;
  }
  Polarizability p;
  p.value_si = std::sqrt(3.0) * sum;
  p.rank = Rank::vector;
  p.provenance = "alpha1_nJ";
  return p;
}

Polarizability alpha_v_nJF(const Polarizability& alpha1,
                           const HyperfineLevel& level,
                           double hf_correction) {
  level.validate();
  const double fv = level.f.value();
  const double sixj = wigner6j(level.f, HalfInt(2), level.f,
                               level.j, level.i, level.j);
  Polarizability p;
  p.rank = Rank::vector;
  p.provenance = alpha1.provenance + " -> alpha_v_nJF";
  if (sixj == 0.0 || level.f.twice == 0) {
    p.value_si = 0.0;
    p.zero_coupling = true;
    return p;
  }
  const int sign = parity_sign(level.j.twice + level.i.twice + level.f.twice);
  p.value_si = sign * std::sqrt(2.0 * fv * (2.0 * fv + 1.0) / (fv + 1.0)) *
               sixj * alpha1.value_si * hf_correction;
  return p;
}

Polarizability alpha_scalar_nJ(std::span<const FineStructureLine> lines,
                               HalfInt j, double omega) {
  check_far_detuned(lines, omega);
  double sum = 0.0;
  for (const auto& ln : lines) {
    ln.validate();
    const double d2 = (j.twice + 1) * ln.dipole * ln.dipole;
    const std::complex<double> rot(ln.omega - omega, -0.5 * ln.gamma);
    const std::complex<double> crot(ln.omega + omega, 0.5 * ln.gamma);
    sum += d2 * (1.0 / rot + 1.0 / crot).real() / k::hbar;
  }
  Polarizability p;
  p.value_si = sum / (3.0 * (j.twice + 1));
  p.rank = Rank::scalar;
  p.provenance = "alpha_scalar_nJ";
  return p;
}

double vls_per_intensity_hz_cm2(const Polarizability& alpha_v, HalfInt f) {
  if (f.twice == 0) throw std::invalid_argument("F must be > 0");
  return alpha_v.value_si /
         (4.0 * k::speed_of_light * k::epsilon0 * f.value()) / k::planck *
         k::w_cm2_to_w_m2;
}

std::vector<FineStructureLine> parse_line_table(const std::string& text) {
  std::vector<FineStructureLine> lines;
  std::istringstream in(text);
  std::string row;
  bool version_seen = false;
  int lineno = 0;
  while (std::getline(in, row)) {
    ++lineno;
    const auto pos = row.find('#');
    if (pos != std::string::npos) row.erase(pos);
    std::istringstream ss(row);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "format_version") {
      int v = 0;
      ss >> v;
      if (v != 1) throw ConfigError("line table: unsupported format_version");
      version_seen = true;
    } else if (tag == "species" || tag == "two_j") {
      continue;  // informational
    } else if (tag == "line") {
      FineStructureLine ln;
      std::string key;
      ss >> ln.label;
      while (ss >> key) {
        double val = 0.0;
        if (!(ss >> val)) {
          throw ConfigError("line table row " + std::to_string(lineno) +
                            ": key '" + key + "' expects a number");
        }
        if (key == "upper_two_j") ln.upper_j = HalfInt(static_cast<int>(val));
        else if (key == "omega") ln.omega = val;
        else if (key == "gamma") ln.gamma = val;
        else if (key == "dipole") ln.dipole = val;
        else throw ConfigError("line table row " + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
      }
      ln.validate();
      lines.push_back(ln);
    } else {
      throw ConfigError("line table row " + std::to_string(lineno) +
                        ": unknown tag '" + tag + "'");
    }
  }
  if (!version_seen) throw ConfigError("line table: missing format_version");
  if (lines.empty()) throw ConfigError("line table: no lines");
  return lines;
}

std::vector<FineStructureLine> load_line_table(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open line table '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_line_table(buf.str());
}

const std::vector<FineStructureLine>& rb87_d_lines() {
  static const std::vector<FineStructureLine> table = {
      {"D1", HalfInt(1), 2.369436073136980e15, 3.612831551628262e7,
       2.537173576328995e-29},
      {"D2", HalfInt(3), 2.414191334582974e15, 3.811757198453568e7,
       3.584240951904610e-29},
  };
  return table;
}

HyperfineLevel rb87_f1_level() {
  return HyperfineLevel{HalfInt(k::rb87::two_j), HalfInt(k::rb87::two_i),
                        HalfInt(k::rb87::two_f), k::rb87::g_f};
}

}  // namespace vls::atomprops
