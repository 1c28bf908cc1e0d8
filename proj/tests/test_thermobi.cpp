#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vls/constants.hpp"
#include "vls/errors.hpp"
#include "vls/thermobi.hpp"

using namespace vls;
using namespace vls::thermobi;
namespace k = vls::constants;

namespace {
HeatingScenario default_scenario() { return HeatingScenario{}; }
}

TEST_SUITE("thermobi") {

TEST_CASE("absorbed_power") {
  const auto mat = WindowMaterial::fused_silica();
  const auto scn = default_scenario();
  // mu = 0.1/m, d = 5 mm, P = 10 W: 5 mW
  CHECK(absorbed_power_w(scn, mat) == doctest::Approx(5e-3).epsilon(1e-12));
  auto clear = mat;
  clear.mu = 0.0;
  CHECK(absorbed_power_w(scn, clear) == 0.0);
  auto measured = mat;
  measured.mu = WindowMaterial::fused_silica_measured_mu;
  CHECK(absorbed_power_w(scn, measured) == doctest::Approx(90e-6).epsilon(1e-12));
}

TEST_CASE("temp_rise: characteristic temperature and 10 s value") {
  const auto mat = WindowMaterial::fused_silica();
  const auto scn = default_scenario();
  const auto tr = temp_rise(scn, mat, 10.0);
  CHECK(tr.t0_k == doctest::Approx(60e-3).epsilon(0.02));        // ~60 mK
  CHECK(tr.delta_t_k == doctest::Approx(400e-3).epsilon(0.01));  // ~400 mK
  CHECK(tr.delta_t_k / tr.t0_k == doctest::Approx(6.6).epsilon(0.01));
  CHECK(tr.tau_s == doctest::Approx(28e-3).epsilon(0.02));
  CHECK(tr.log_window_ok);
  CHECK(temp_rise(scn, mat, 0.0).delta_t_k == 0.0);
  // outside the validity window the flag drops but the value still computes
  CHECK_FALSE(temp_rise(scn, mat, 1e-3).log_window_ok);
  CHECK(temp_rise(scn, mat, 1e-3).delta_t_k > 0.0);
}

TEST_CASE("temp_rise: linear early, logarithmic late") {
  const auto mat = WindowMaterial::fused_silica();
  const auto scn = default_scenario();
  const auto tr = temp_rise(scn, mat, 1.0);
  // t << tau: dT ~ T0 * 2 D t / w^2 (linear)
  const double t1 = 1e-4, t2 = 2e-4;
  const double d1 = temp_rise(scn, mat, t1).delta_t_k;
  const double d2 = temp_rise(scn, mat, t2).delta_t_k;
  CHECK(d2 / d1 == doctest::Approx(2.0).epsilon(5e-3));
  const double lin = tr.t0_k * 2 * mat.diffusivity * t1 /
                     (scn.beam_radius_m * scn.beam_radius_m);
  CHECK(d1 == doctest::Approx(lin).epsilon(5e-3));
  // t >> tau: increments follow the log
  const double l1 = temp_rise(scn, mat, 5.0).delta_t_k;
  const double l2 = temp_rise(scn, mat, 10.0).delta_t_k;
  CHECK(l2 - l1 == doctest::Approx(tr.t0_k * std::log(2.0)).epsilon(5e-3));
}

TEST_CASE("axial_stress") {
  const auto mat = WindowMaterial::fused_silica();
  CHECK(axial_stress_pa(0.4, mat) == doctest::Approx(7.2e3).epsilon(1e-12));
  CHECK(axial_stress_pa(0.0, mat) == 0.0);
  CHECK(axial_stress_pa(0.8, mat) ==
        doctest::Approx(2 * axial_stress_pa(0.4, mat)).epsilon(1e-12));
}

TEST_CASE("opd_bound") {
  const auto mat = WindowMaterial::fused_silica();
  const auto ob = opd_bound(7.2e3, mat, 5e-3, 1064e-9);
  CHECK(ob.opd_m == doctest::Approx(1.224e-10).epsilon(1e-3));
  CHECK(ob.retardance_rad == doctest::Approx(7e-4).epsilon(0.05));
  CHECK(opd_bound(0.0, mat, 5e-3, 1064e-9).opd_m == 0.0);
  CHECK(opd_bound(7.2e3, mat, 10e-3, 1064e-9).opd_m ==
        doctest::Approx(2 * ob.opd_m).epsilon(1e-12));
}

TEST_CASE("optoelastic coefficient for fused silica") {
  CHECK(optoelastic_q(WindowMaterial::fused_silica()) ==
        doctest::Approx(-8.0e-8).epsilon(0.01));
}

TEST_CASE("retardance profile: shape and limits") {
  const auto mat = WindowMaterial::fused_silica();
  const auto scn = default_scenario();
  CHECK(retardance_at(scn, mat, 0.0) == 0.0);
  const double tmax = retardance_max(scn, mat);
  // |theta| grows monotonically toward the far-field value
  double prev = 0.0;
  for (double r = 20e-6; r < 2e-3; r *= 1.6) {
    const double th = std::abs(retardance_at(scn, mat, r));
    CHECK(th >= prev);
    prev = th;
  }
  CHECK(prev == doctest::Approx(std::abs(tmax)).epsilon(1e-2));
  // theta(w)/theta_max = 1 + (e^-2 - 1)/2
  const double expect = 1.0 + (std::exp(-2.0) - 1.0) / 2.0;
  CHECK(retardance_at(scn, mat, scn.beam_radius_m) / tmax ==
        doctest::Approx(expect).epsilon(1e-10));
  CHECK(expect == doctest::Approx(0.5677).epsilon(1e-4));
}

TEST_CASE("whole chain is linear in the trap power") {
  const auto mat = WindowMaterial::fused_silica();
  auto scn = default_scenario();
  const auto r1 = evaluate(scn, mat);
  scn.p_odt_w *= 2.0;
  const auto r2 = evaluate(scn, mat);
  CHECK(r2.t0_k == doctest::Approx(2 * r1.t0_k).epsilon(1e-12));
  CHECK(r2.sigma_pa == doctest::Approx(2 * r1.sigma_pa).epsilon(1e-12));
  CHECK(r2.theta_max_rad == doctest::Approx(2 * r1.theta_max_rad).epsilon(1e-12));
}

TEST_CASE("profile retardance stays within order of the OPD bound") {
  const auto mat = WindowMaterial::fused_silica();
  const auto scn = default_scenario();
  const auto rep = evaluate(scn, mat);
  CHECK(std::abs(rep.theta_max_rad) < 5.0 * rep.retardance_bound_rad);
}

TEST_CASE("report carries the direct theta_max evaluation") {
  const auto rep = evaluate(default_scenario(), WindowMaterial::fused_silica());
  // direct evaluation of the closed-form limit: |theta_max| ~ 2.87e-4 rad,
  // about twice the 1.4e-4 reference estimate; both are reported
  CHECK(std::abs(rep.theta_max_rad) == doctest::Approx(2.87e-4).epsilon(0.02));
  CHECK(rep.peak_circularity == doctest::Approx(std::sin(2 * rep.theta_max_rad))
                                    .epsilon(1e-12));
  const auto json = report_to_json(rep);
  CHECK(json.find("theta_max_rad") != std::string::npos);
  CHECK(json.find("theta_at_w_over_max") != std::string::npos);
}

TEST_CASE("profile CSV") {
  std::ostringstream os;
  write_profile_csv(os, default_scenario(), WindowMaterial::fused_silica(),
                    400e-6, 41);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "r_m,retardance_rad");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 41);
}

TEST_CASE("material validation") {
  auto mat = WindowMaterial::fused_silica();
  mat.poisson = 0.7;
  CHECK_THROWS_AS(mat.validate(), ConfigError);
  auto scn = default_scenario();
  scn.thickness_m = 0.0;
  CHECK_THROWS_AS(scn.validate(), ConfigError);
}

}  // TEST_SUITE
