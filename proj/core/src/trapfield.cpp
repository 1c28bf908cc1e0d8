#include "vls/trapfield.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "vls/constants.hpp"
#include "vls/errors.hpp"

namespace vls::trapfield {

namespace k = vls::constants;

void GaussianBeam::validate() const {
  if (power_w < 0) throw ConfigError("beam power must be >= 0");
  if (!(waist_m > 0)) throw ConfigError("beam waist must be > 0");
  if (!(wavelength_m > 0)) throw ConfigError("beam wavelength must be > 0");
  if (std::abs(norm(direction) - 1.0) > 1e-9) {
    throw ConfigError("beam direction must be a unit vector");
  }
}

double GaussianBeam::rayleigh_range() const {
  return k::pi * waist_m * waist_m / wavelength_m;
}

double GaussianBeam::peak_intensity() const {
  return 2.0 * power_w / (k::pi * waist_m * waist_m);
}

double MagneticEnvironment::magnitude_at(const Vec3& r_m) const {
  return norm(bias_g) +
         gradient_g_per_cm * 100.0 * dot(r_m, normalized(gradient_axis));
}

double intensity_at(const GaussianBeam& beam, const Vec3& r) {
  if (beam.power_w == 0.0) return 0.0;
  const Vec3 rel = r - beam.focus;
  const double z = dot(rel, beam.direction);
  const double rho2 = std::max(dot(rel, rel) - z * z, 0.0);
  const double zr = beam.rayleigh_range();
  const double w2 = beam.waist_m * beam.waist_m * (1.0 + (z / zr) * (z / zr));
  return 2.0 * beam.power_w / (k::pi * w2) * std::exp(-2.0 * rho2 / w2);
}

double dipole_potential(std::span<const GaussianBeam> beams,
                        double alpha_scalar_si, const Vec3& r) {
  double i_tot = 0.0;
  for (const auto& b : beams) i_tot += intensity_at(b, r);
  return -alpha_scalar_si * i_tot / (2.0 * k::speed_of_light * k::epsilon0);
}

Vec3 trap_minimum(std::span<const GaussianBeam> beams, double alpha_scalar_si,
                  double mass_kg, const Vec3& gravity) {
  if (beams.empty()) throw ConfigError("trap_minimum: no beams");
  for (const auto& b : beams) b.validate();
  const Vec3 origin = beams[0].focus;
  const double gmag = norm(gravity);
  if (gmag == 0.0 || mass_kg == 0.0) return origin;
  const Vec3 ghat = gravity / gmag;  // downhill direction
  const double weight = mass_kg * gmag;

  // total potential along r(s) = origin + s*ghat is
  //   V(s) = U_dip(s) - m g s ; stationary where dU_dip/ds = m g
  auto dU = [&](double s) {
    const double h = 0.5e-9;
    const Vec3 ra = origin + (s - h) * ghat;
    const Vec3 rb = origin + (s + h) * ghat;
    return (dipole_potential(beams, alpha_scalar_si, rb) -
            dipole_potential(beams, alpha_scalar_si, ra)) / (2.0 * h);
  };

  double wmax = 0.0;
  for (const auto& b : beams) wmax = std::max(wmax, b.waist_m);

  // scan for restoring force >= weight; the stable zero of f sits before
  // the force maximum
  auto f = [&](double s) { return dU(s) - weight; };
  const double step = wmax / 400.0;
  double lo = 0.0, flo = f(0.0);
  double hi = 0.0;
  bool bracketed = false;
  for (double s = step; s <= 1.5 * wmax; s += step) {
    const double fs = f(s);
    if (flo < 0.0 && fs >= 0.0) { hi = s; bracketed = true; break; }
    lo = s; flo = fs;
  }
  if (!bracketed) {
    throw NoBoundMinimumError(
        "trap_minimum: dipole force cannot support the atoms against gravity");
  }
  while (hi - lo > 1e-8) {  // 10 nm
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return origin + 0.5 * (lo + hi) * ghat;
}

FieldMap vls_field_map(std::vector<GaussianBeam> beams, double alpha_v_si,
                       double g_f, double f) {
  for (const auto& b : beams) b.validate();
  return [beams = std::move(beams), alpha_v_si, g_f, f](const Vec3& r) {
    Vec3 total{};
    for (const auto& b : beams) {
      total += polopt::fictitious_field(intensity_at(b, r), b.polarization,
                                        b.direction, alpha_v_si, g_f, f);
    }
    return total;
  };
}

TrapSite evaluate_site(std::span<const GaussianBeam> beams, const Vec3& r,
                       double alpha_v_si, double g_f, double f) {
  TrapSite site;
  site.position = r;
  for (const auto& b : beams) {
    const double i = intensity_at(b, r);
    site.intensity_per_beam.push_back(i);
    site.intensity_total += i;
    site.b_vls_g += polopt::fictitious_field(i, b.polarization, b.direction,
                                             alpha_v_si, g_f, f);
  }
  return site;
}

ZeemanShift vls_zeeman_shift(double i0_w_m2, double theta, double nu,
                             int m_f, double f, double alpha_v_si,
                             double g_f, double b0_g) {
  // field magnitude for |sin 2theta| circularity, gauss
  const double b = std::abs(
      i0_w_m2 * alpha_v_si * std::sin(2.0 * theta) /
      (4.0 * k::speed_of_light * k::epsilon0 * k::bohr_magneton * g_f * f)) *
      k::gauss_per_tesla;
  const double slope = k::bohr_magneton * g_f * m_f * k::tesla_per_gauss / k::planck;
  ZeemanShift out;
  const double btot =
      std::sqrt(b0_g * b0_g + b * b + 2.0 * b0_g * b * std::cos(nu));
  out.exact_h_hz = slope * (btot - b0_g);
  out.approx_h_hz = slope * b * std::cos(nu);
  return out;
}

double dephasing_time_s(double r_tf_m, double gradient_g_per_cm, double g_f) {
  if (gradient_g_per_cm <= 0.0) return std::numeric_limits<double>::infinity();
  const double gamma = k::gyromag_rad_s_t(g_f);  // rad/s/T
  const double grad_t_m = gradient_g_per_cm * k::g_cm_to_t_m;
  return k::two_pi / (2.0 * r_tf_m * gamma * grad_t_m);
}

double trap_frequency_at(std::span<const GaussianBeam> beams,
                         double alpha_scalar_si, double mass_kg,
                         const Vec3& r, const Vec3& axis) {
  const Vec3 a = normalized(axis);
  const double h = 50e-9;
  const double vm = dipole_potential(beams, alpha_scalar_si, r - h * a);
  const double v0 = dipole_potential(beams, alpha_scalar_si, r);
  const double vp = dipole_potential(beams, alpha_scalar_si, r + h * a);
  const double curv = (vp - 2.0 * v0 + vm) / (h * h);
  if (curv <= 0.0) throw NumericalError("trap_frequency_at: no confinement here");
  return std::sqrt(curv / mass_kg);
}

void export_field_csv(std::ostream& out, const FieldMap& field,
                      const Vec3& lo, const Vec3& hi, int nx, int ny, int nz) {
  out << "x_m,y_m,z_m,bx_g,by_g,bz_g,bmag_g\n";
  char buf[256];
  auto coord = [](double a, double b, int i, int n) {
    return n <= 1 ? a : a + (b - a) * i / (n - 1);
  };
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy)
      for (int iz = 0; iz < nz; ++iz) {
        const Vec3 r{coord(lo.x, hi.x, ix, nx), coord(lo.y, hi.y, iy, ny),
                     coord(lo.z, hi.z, iz, nz)};
        const Vec3 b = field(r);
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      r.x, r.y, r.z, b.x, b.y, b.z, norm(b));
        out << buf;
      }
}

}  // namespace vls::trapfield
