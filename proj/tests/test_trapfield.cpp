#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "vls/atomprops.hpp"
#include "vls/constants.hpp"
#include "vls/rng.hpp"
#include "vls/trapfield.hpp"

using namespace vls;
using namespace vls::trapfield;
namespace k = vls::constants;

namespace {

GaussianBeam reference_beam(double circ_theta = 0.0) {
  GaussianBeam b;
  b.power_w = 0.55;
  b.waist_m = 67e-6;
  b.wavelength_m = 1064e-9;
  b.direction = {0, 0, 1};
  b.polarization = polopt::state_from_theta_phi(circ_theta, 0.0);
  return b;
}

double alpha_scalar_1064() {
  const double w = k::two_pi * k::speed_of_light / 1064e-9;
  return atomprops::alpha_scalar_nJ(atomprops::rb87_d_lines(),
                                    atomprops::HalfInt(1), w).value_si;
}

double alpha_v_1064() {
  const double w = k::two_pi * k::speed_of_light / 1064e-9;
  return atomprops::alpha_v_nJF(
             atomprops::alpha1_nJ(atomprops::rb87_d_lines(),
                                  atomprops::HalfInt(1), w),
             atomprops::rb87_f1_level()).value_si;
}

const Vec3 gravity{0, -k::standard_gravity, 0};

}  // namespace

TEST_SUITE("trapfield") {

TEST_CASE("intensity_at: peak, off-axis, zero power") {
  const auto b = reference_beam();
  // 2P/(pi w^2) for 550 mW, 67 um: 7.8e3 W/cm^2
  CHECK(intensity_at(b, {0, 0, 0}) ==
        doctest::Approx(7.8e3 * 1e4).epsilon(2e-4));
  CHECK(intensity_at(b, {b.waist_m, 0, 0}) ==
        doctest::Approx(std::exp(-2.0) * b.peak_intensity()).epsilon(1e-12));
  auto dark = b;
  dark.power_w = 0.0;
  CHECK(intensity_at(dark, {0, 0, 0}) == 0.0);
  // Rayleigh-range divergence: on-axis intensity halves at z = zR
  CHECK(intensity_at(b, {0, 0, b.rayleigh_range()}) ==
        doctest::Approx(0.5 * b.peak_intensity()).epsilon(1e-12));
}

TEST_CASE("trap_minimum: g = 0 sits at the intensity maximum") {
  const auto b = reference_beam();
  const std::vector<GaussianBeam> beams{b};
  const auto r = trap_minimum(beams, alpha_scalar_1064(), k::rb87::mass, {0, 0, 0});
  CHECK(norm(r - b.focus) < 1e-8);
}

TEST_CASE("trap_minimum: reference single-beam trap sags about 10 um") {
  const std::vector<GaussianBeam> beams{reference_beam()};
  const auto r = trap_minimum(beams, alpha_scalar_1064(), k::rb87::mass, gravity);
  const double sag = -r.y;
  // derived oracle value 10.14 um; the reference value is 10 um +- 10%
  CHECK(sag == doctest::Approx(10.14e-6).epsilon(5e-3));
  CHECK(sag > 9e-6);
  CHECK(sag < 11e-6);
}

TEST_CASE("trap_minimum: sag grows as the trap weakens, then unbinds") {
  const double as = alpha_scalar_1064();
  double prev_sag = 0.0;
  for (double p : {0.8, 0.55, 0.4, 0.3}) {
    auto b = reference_beam();
    b.power_w = p;
    const std::vector<GaussianBeam> beams{b};
    const double sag =
        -trap_minimum(beams, as, k::rb87::mass, gravity).y;
    CHECK(sag > prev_sag);
    prev_sag = sag;
  }
  auto weak = reference_beam();
  weak.power_w = 0.25;  // below the ~0.26 W holding threshold
  const std::vector<GaussianBeam> weak_beams{weak};
  CHECK_THROWS_AS(trap_minimum(weak_beams, as, k::rb87::mass, gravity),
                  NoBoundMinimumError);
  // halving alpha_s at fixed power also deepens the sag
  const std::vector<GaussianBeam> beams{reference_beam()};
  const double sag_full = -trap_minimum(beams, as, k::rb87::mass, gravity).y;
  const double sag_half = -trap_minimum(beams, 0.5 * as, k::rb87::mass, gravity).y;
  CHECK(sag_half > sag_full);
}

TEST_CASE("vls_field_map: reference values at the sagged minimum") {
  const auto beam = reference_beam(0.5 * std::asin(0.07));  // circularity 0.07
  const std::vector<GaussianBeam> beams{beam};
  const double as = alpha_scalar_1064();
  const double av = alpha_v_1064();
  const auto rmin = trap_minimum(beams, as, k::rb87::mass, gravity);
  const auto field = vls_field_map({beam}, av, k::rb87::g_f, 1.0);

  const double bmag = norm(field(rmin));
  // derived oracle: 0.2506 mG (the one-significant-figure reference value is
  // 0.3 mG; see the acceptance suite for the band check)
  CHECK(bmag == doctest::Approx(0.2506e-3).epsilon(5e-3));

  // vertical gradient via central differences, expect ~22.6 mG/cm,
  // within the reference 24 mG/cm +- 15%
  const double h = 1e-7;
  const double gup = norm(field(rmin + Vec3{0, h, 0}));
  const double gdn = norm(field(rmin - Vec3{0, h, 0}));
  const double grad_g_per_cm = std::abs(gup - gdn) / (2 * h) / 100.0;
  CHECK(grad_g_per_cm == doctest::Approx(22.65e-3).epsilon(1e-2));
  CHECK(grad_g_per_cm > 24e-3 * 0.85);
  CHECK(grad_g_per_cm < 24e-3 * 1.15);
}

TEST_CASE("vls_field_map: opposite beams cancel; linear in power") {
  auto fwd = reference_beam(0.2);
  auto bwd = fwd;
  bwd.direction = {0, 0, -1};
  const double av = alpha_v_1064();
  const auto field = vls_field_map({fwd, bwd}, av, k::rb87::g_f, 1.0);
  CHECK(norm(field({10e-6, -5e-6, 0})) < 1e-18);

  const auto f1 = vls_field_map({fwd}, av, k::rb87::g_f, 1.0);
  auto half = fwd;
  half.power_w *= 0.5;
  const auto f2 = vls_field_map({half}, av, k::rb87::g_f, 1.0);
  const Vec3 probe{5e-6, -8e-6, 1e-3};
  CHECK(norm(f1(probe)) == doctest::Approx(2 * norm(f2(probe))).epsilon(1e-12));
}

TEST_CASE("vls_zeeman_shift: limits and series identity") {
  const double av = alpha_v_1064();
  // theta = 0: no shift
  const auto z0 = vls_zeeman_shift(1e7, 0.0, 0.0, 1, 1.0, av, -0.5, 0.5);
  CHECK(z0.exact_h_hz == 0.0);
  CHECK(z0.approx_h_hz == 0.0);

  // nu = pi/2: approx vanishes; exact is second order, ratio to
  // Bvls^2/(2 B0) is 1 within 1e-6
  const double i0 = 1e7;
  const auto zp = vls_zeeman_shift(i0, 0.1, 0.5 * k::pi, 1, 1.0, av, -0.5, 0.5);
  CHECK(std::abs(zp.approx_h_hz) < 1e-12);
  const double b = std::abs(i0 * av * std::sin(0.2) /
                            (4 * k::speed_of_light * k::epsilon0 *
                             k::bohr_magneton * 0.5 * 1.0)) * 1e4;
  const double second_order = k::bohr_magneton * (-0.5) * k::tesla_per_gauss /
                              k::planck * (b * b / (2 * 0.5));
  CHECK(zp.exact_h_hz / second_order == doctest::Approx(1.0).epsilon(1e-6));

  // nu = 0, C = 1, mF/F = 1, I = 1 W/cm^2: -h x 0.336 Hz
  const auto zm = vls_zeeman_shift(1e4, 0.25 * k::pi, 0.0, 1, 1.0, av, -0.5, 1.0);
  CHECK(zm.approx_h_hz == doctest::Approx(-0.336).epsilon(2e-3));
  CHECK(zm.exact_h_hz == doctest::Approx(zm.approx_h_hz).epsilon(1e-3));
}

TEST_CASE("exact vs approximate shift: series bound over random geometries") {
  const double av = alpha_v_1064();
  const rng::Stream rs(15, "trap.zeeman");
  for (int i = 0; i < 10000; ++i) {
    const double i0 = 1e6 + rs.uniform(4 * i) * 5e7;
    const double th = (rs.uniform(4 * i + 1) - 0.5) * 0.5 * k::pi;
    const double nu = rs.uniform(4 * i + 2) * k::pi;
    const double b0 = 0.3 + rs.uniform(4 * i + 3) * 2.0;
    const double bvls = std::abs(i0 * av * std::sin(2 * th) /
                                 (4 * k::speed_of_light * k::epsilon0 *
                                  k::bohr_magneton * 0.5)) * 1e4;
    if (bvls / b0 > 0.1) continue;
    const auto z = vls_zeeman_shift(i0, th, nu, 1, 1.0, av, -0.5, b0);
    const double denom = std::abs(k::bohr_magneton * 0.5 * k::tesla_per_gauss /
                                  k::planck * bvls);
    if (denom < 1e-9) continue;
    CHECK(std::abs(z.exact_h_hz - z.approx_h_hz) / denom <= bvls / b0 + 1e-12);
  }
}

TEST_CASE("field magnitude gradient matches finite differences") {
  const auto beam = reference_beam(0.1);
  const double av = alpha_v_1064();
  const auto field = vls_field_map({beam}, av, k::rb87::g_f, 1.0);
  const MagneticEnvironment env{{0, 0, 0.5}, 0.0, {0, 1, 0}};
  auto mag = [&](const Vec3& r) { return norm(Vec3{0, 0, 0.5} + field(r)); };
  (void)env;
  const Vec3 r0{3e-6, -9e-6, 2e-4};
  const double h1 = 4e-8, h2 = 2e-8;
  const double g1 = (mag(r0 + Vec3{0, h1, 0}) - mag(r0 - Vec3{0, h1, 0})) / (2 * h1);
  const double g2 = (mag(r0 + Vec3{0, h2, 0}) - mag(r0 - Vec3{0, h2, 0})) / (2 * h2);
  CHECK(g1 == doctest::Approx(g2).epsilon(1e-6));
}

TEST_CASE("dephasing_time") {
  // r_TF = 13 um, B' = 22 mG/cm -> about 25 ms
  const double t = dephasing_time_s(13e-6, 22e-3, -0.5);
  CHECK(t == doctest::Approx(25e-3).epsilon(5e-2));
  CHECK(t == doctest::Approx(24.98e-3).epsilon(1e-3));
  CHECK(std::isinf(dephasing_time_s(13e-6, 0.0, -0.5)));
  CHECK(dephasing_time_s(13e-6, 44e-3, -0.5) ==
        doctest::Approx(0.5 * t).epsilon(1e-12));
}

TEST_CASE("trap curvature frequency helper scales as sqrt(P)") {
  const double as = alpha_scalar_1064();
  auto b1 = reference_beam();
  const std::vector<GaussianBeam> beams1{b1};
  auto b2 = reference_beam();
  b2.power_w *= 4.0;
  const std::vector<GaussianBeam> beams2{b2};
  const double w1 = trap_frequency_at(beams1, as, k::rb87::mass, {0, 0, 0}, {0, 1, 0});
  const double w2 = trap_frequency_at(beams2, as, k::rb87::mass, {0, 0, 0}, {0, 1, 0});
  CHECK(w2 == doctest::Approx(2.0 * w1).epsilon(1e-5));
  CHECK(w1 > 0);
}

TEST_CASE("evaluate_site sums intensities and fields over beams") {
  auto b1 = reference_beam(0.1);
  auto b2 = reference_beam(0.05);
  b2.direction = {1, 0, 0};
  b2.power_w = 0.3;
  const std::vector<GaussianBeam> beams{b1, b2};
  const double av = alpha_v_1064();
  const Vec3 r{2e-6, -5e-6, 1e-5};
  const auto site = evaluate_site(beams, r, av, k::rb87::g_f, 1.0);
  REQUIRE(site.intensity_per_beam.size() == 2);
  CHECK(site.intensity_total ==
        doctest::Approx(site.intensity_per_beam[0] + site.intensity_per_beam[1])
            .epsilon(1e-12));
  const auto field = vls_field_map({b1, b2}, av, k::rb87::g_f, 1.0);
  CHECK(norm(site.b_vls_g - field(r)) < 1e-15);
}

TEST_CASE("field map CSV export shape") {
  const auto field = vls_field_map({reference_beam(0.1)}, alpha_v_1064(),
                                   k::rb87::g_f, 1.0);
  std::ostringstream os;
  export_field_csv(os, field, {-1e-5, -1e-5, 0}, {1e-5, 1e-5, 0}, 3, 3, 1);
  std::istringstream is(os.str());
  std::string line;
  int rows = 0;
  std::getline(is, line);
  CHECK(line == "x_m,y_m,z_m,bx_g,by_g,bz_g,bmag_g");
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 9);
}

}  // TEST_SUITE
