#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "vls/constants.hpp"
#include "vls/ramsey.hpp"
#include "vls/rng.hpp"

using namespace vls;
using namespace vls::ramsey;
namespace k = vls::constants;

namespace {

RamseyConfig base_config(int shots, std::uint64_t seed) {
  RamseyConfig cfg;
  cfg.interrogation_s = 0.015;
  cfg.pulse_phases = RamseyConfig::phase_grid(shots);
  cfg.contrast_a = cfg.contrast_b = 1.0;
  cfg.readout_sigma = 0.0;
  cfg.seed = seed;
  return cfg;
}

double delta_b_for_phase(double dphi, double t) {
  return dphi / (k::gyromag_rad_s_g(-0.5) * t);
}

// exact conic for x = ca cos(t), y = cb cos(t + dphi)
std::array<double, 6> truth_conic(double ca, double cb, double dphi) {
  std::array<double, 6> c{};
  c[0] = 1.0 / (ca * ca);
  c[1] = -2.0 * std::cos(dphi) / (ca * cb);
  c[2] = 1.0 / (cb * cb);
  c[3] = c[4] = 0.0;
  c[5] = -std::sin(dphi) * std::sin(dphi);
  const double n = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  for (auto& v : c) v /= n;
  return c;
}

std::vector<Point2> to_points(const std::vector<ShotRecord>& shots) {
  std::vector<Point2> p(shots.size());
  for (std::size_t i = 0; i < shots.size(); ++i) p[i] = {shots[i].fza, shots[i].fzb};
  return p;
}

}  // namespace

TEST_SUITE("ramsey") {

TEST_CASE("simulate_shots: zero noise, dphi = 0 puts points on the diagonal") {
  auto cfg = base_config(50, 3);
  cfg.delta_b_g = 0.0;
  for (const auto& s : simulate_shots(cfg)) {
    CHECK(s.fza == doctest::Approx(s.fzb).epsilon(1e-13));
  }
}

TEST_CASE("simulate_shots: dphi = pi/2 at unit contrast lies on the circle") {
  auto cfg = base_config(50, 4);
  cfg.delta_b_g = delta_b_for_phase(0.5 * k::pi, cfg.interrogation_s);
  for (const auto& s : simulate_shots(cfg)) {
    CHECK(s.fza * s.fza + s.fzb * s.fzb == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("simulate_shots: deterministic and contrast-bounded") {
  auto cfg = base_config(200, 99);
  cfg.contrast_a = cfg.contrast_b = 0.8;
  cfg.delta_b_g = delta_b_for_phase(0.7, cfg.interrogation_s);
  const auto a = simulate_shots(cfg);
  const auto b = simulate_shots(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].fza == b[i].fza);  // bit-identical
    CHECK(a[i].fzb == b[i].fzb);
    CHECK(std::abs(a[i].fza) <= 0.8 + 1e-12);
    CHECK(std::abs(a[i].fzb) <= 0.8 + 1e-12);
  }
  // oracle from the retained common phase
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double expect = 0.8 * std::cos(a[i].common_phase - a[i].pulse_phase);
    CHECK(a[i].fza == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("simulate_shots: gaussian phase noise only partially scrambles") {
  auto cfg = base_config(400, 55);
  cfg.noise = NoiseDistribution::gaussian;
  cfg.noise_rms_rad = 0.3;  // partial scrambling: psi stays near zero
  const auto shots = simulate_shots(cfg);
  double worst = 0.0;
  for (const auto& s : shots) worst = std::max(worst, std::abs(s.common_phase));
  CHECK(worst < 0.3 * 5.0);  // bounded, unlike the uniform 2 pi scramble
  // and the mechanism is the retained psi itself
  for (const auto& s : shots) {
    CHECK(s.fza == doctest::Approx(std::cos(s.common_phase - s.pulse_phase))
                       .epsilon(1e-12));
  }
}

TEST_CASE("simulate_shots: config validation") {
  RamseyConfig bad;
  bad.interrogation_s = 0.0;
  bad.pulse_phases = RamseyConfig::phase_grid(10);
  CHECK_THROWS_AS(simulate_shots(bad), ConfigError);
  RamseyConfig few;
  few.pulse_phases = RamseyConfig::phase_grid(5);
  CHECK_THROWS_AS(simulate_shots(few), ConfigError);
  RamseyConfig c0;
  c0.pulse_phases = RamseyConfig::phase_grid(10);
  c0.contrast_a = 0.0;
  CHECK_THROWS_AS(simulate_shots(c0), ConfigError);
}

TEST_CASE("qz_contrast: limits and the 15 ms local maximum") {
  CHECK(qz_contrast(0.0, 0.5) == doctest::Approx(1.0));
  CHECK(qz_contrast(0.02, 0.0) == doctest::Approx(1.0));
  // bias that puts the first contrast maximum at 15 ms
  const double b0 = std::sqrt(1.0 / (2 * k::rb87::qz_hz_per_g2 * 0.015));
  CHECK(qz_nearest_contrast_max_s(0.015, b0) ==
        doctest::Approx(0.015).epsilon(1e-9));
  CHECK(qz_contrast(qz_nearest_contrast_max_s(0.0139, b0), b0) >
        doctest::Approx(0.9999));
}

TEST_CASE("ellipse_fit: exact samples reproduce the conic to 1e-8") {
  std::vector<Point2> pts;
  for (int i = 0; i < 20; ++i) {
    const double t = k::two_pi * i / 20.0;
    pts.push_back({0.8 * std::cos(t), 0.7 * std::cos(t + 0.3)});
  }
  EllipseFitOptions opts;
  opts.bootstrap_samples = 0;
  const auto fit = ellipse_fit(pts, opts);
  const auto truth = truth_conic(0.8, 0.7, 0.3);
  for (int i = 0; i < 6; ++i) {
    CHECK(fit.conic[i] == doctest::Approx(truth[i]).epsilon(1e-8));
  }
  CHECK(fit.delta_phi == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(fit.discriminant < 0);
}

TEST_CASE("ellipse_fit: circle gives dphi = pi/2") {
  std::vector<Point2> pts;
  for (int i = 0; i < 40; ++i) {
    const double t = k::two_pi * i / 40.0;
    pts.push_back({0.8 * std::cos(t), 0.8 * std::sin(t)});
  }
  EllipseFitOptions opts;
  opts.bootstrap_samples = 0;
  const auto fit = ellipse_fit(pts, opts);
  CHECK(std::abs(fit.conic[1]) < 1e-9);
  CHECK(fit.conic[0] == doctest::Approx(fit.conic[2]).epsilon(1e-9));
  CHECK(fit.delta_phi == doctest::Approx(0.5 * k::pi).epsilon(1e-6));
}

TEST_CASE("ellipse_fit: order invariance is exact") {
  auto cfg = base_config(300, 12);
  cfg.contrast_a = cfg.contrast_b = 0.8;
  cfg.readout_sigma = 0.02;
  cfg.delta_b_g = delta_b_for_phase(1.1, cfg.interrogation_s);
  auto pts = to_points(simulate_shots(cfg));
  const auto f1 = ellipse_fit(pts);
  std::mt19937 rng(7);
  std::shuffle(pts.begin(), pts.end(), rng);
  const auto f2 = ellipse_fit(pts);
  for (int i = 0; i < 6; ++i) CHECK(f1.conic[i] == f2.conic[i]);
  CHECK(f1.delta_phi == f2.delta_phi);
  CHECK(f1.u_delta_phi == f2.u_delta_phi);
}

TEST_CASE("ellipse_fit: degenerate input raises") {
  std::vector<Point2> few{{0, 0}, {1, 1}, {2, 0}, {0, 2}, {1, 0}};
  CHECK_THROWS_AS(ellipse_fit(few), DegenerateFitError);
  std::vector<Point2> line;
  for (int i = 0; i < 30; ++i) line.push_back({0.1 * i, 0.2 * i});
  CHECK_THROWS_AS(ellipse_fit(line), DegenerateFitError);
}

TEST_CASE("ellipse_fit: contrast rescaling and axis swap leave the phase") {
  auto cfg = base_config(400, 21);
  cfg.contrast_a = cfg.contrast_b = 0.8;
  cfg.readout_sigma = 0.01;
  cfg.delta_b_g = delta_b_for_phase(0.9, cfg.interrogation_s);
  auto pts = to_points(simulate_shots(cfg));
  EllipseFitOptions opts;
  opts.bootstrap_samples = 0;
  const double p0 = ellipse_fit(pts, opts).delta_phi;

  auto scaled = pts;
  for (auto& p : scaled) { p.x *= 0.35; p.y *= 0.35; }
  CHECK(ellipse_fit(scaled, opts).delta_phi == doctest::Approx(p0).epsilon(1e-9));

  auto swapped = pts;
  for (auto& p : swapped) std::swap(p.x, p.y);
  CHECK(ellipse_fit(swapped, opts).delta_phi == doctest::Approx(p0).epsilon(1e-9));
}

TEST_CASE("closed loop: recovered phase bias < 0.005 rad at 500 shots") {
  // Monte-Carlo oracle against the known ground truth
  const double dphi_true = 1.0;
  double sum = 0.0;
  const int seeds = 100;
  EllipseFitOptions opts;
  opts.bootstrap_samples = 0;
  for (int s = 0; s < seeds; ++s) {
    auto cfg = base_config(500, 1000 + s);
    cfg.contrast_a = cfg.contrast_b = 0.8;
    cfg.readout_sigma = 0.02;
    cfg.delta_b_g = delta_b_for_phase(dphi_true, cfg.interrogation_s);
    sum += ellipse_fit(to_points(simulate_shots(cfg)), opts).delta_phi;
  }
  CHECK(std::abs(sum / seeds - dphi_true) < 0.005);
}

TEST_CASE("phase extraction folds into [0, pi] and flags the branch") {
  // dphi > pi folds to 2pi - dphi
  auto cfg = base_config(400, 31);
  cfg.delta_b_g = delta_b_for_phase(4.0, cfg.interrogation_s);
  EllipseFitOptions opts;
  opts.bootstrap_samples = 0;
  const auto fit = ellipse_fit(to_points(simulate_shots(cfg)), opts);
  CHECK(fit.delta_phi == doctest::Approx(k::two_pi - 4.0).epsilon(1e-6));
  CHECK(fit.delta_phi >= 0.0);
  CHECK(fit.delta_phi <= k::pi);
}

TEST_CASE("phase_from_conic") {
  CHECK(phase_from_conic(truth_conic(1, 1, 0.5 * k::pi)) ==
        doctest::Approx(0.5 * k::pi).epsilon(1e-12));
  CHECK(phase_from_conic(truth_conic(0.8, 0.6, 0.3)) ==
        doctest::Approx(0.3).epsilon(1e-10));
  // non-ellipse and indeterminate-phase conics raise
  std::array<double, 6> hyper{1.0, 3.0, 1.0, 0.0, 0.0, -1.0};
  CHECK_THROWS_AS(phase_from_conic(hyper), DegenerateFitError);
  std::array<double, 6> parab{1.0, -2.0, 1.0, 0.0, 0.0, -1e-6};
  CHECK_THROWS_AS(phase_from_conic(parab), DegenerateFitError);
}

TEST_CASE("bootstrap u(dphi) tracks the seed-to-seed spread") {
  const double dphi_true = 0.8;
  std::vector<double> phases, us;
  for (int s = 0; s < 40; ++s) {
    auto cfg = base_config(300, 500 + s);
    cfg.contrast_a = cfg.contrast_b = 0.8;
    cfg.readout_sigma = 0.02;
    cfg.delta_b_g = delta_b_for_phase(dphi_true, cfg.interrogation_s);
    const auto fit = ellipse_fit(to_points(simulate_shots(cfg)));
    phases.push_back(fit.delta_phi);
    us.push_back(fit.u_delta_phi);
  }
  const double mean = std::accumulate(phases.begin(), phases.end(), 0.0) / phases.size();
  double var = 0;
  for (double p : phases) var += (p - mean) * (p - mean);
  const double spread = std::sqrt(var / (phases.size() - 1));
  std::sort(us.begin(), us.end());
  const double u_med = us[us.size() / 2];
  CHECK(u_med / spread > 0.5);
  CHECK(u_med / spread < 2.0);
}

TEST_CASE("shots CSV round-trips") {
  auto cfg = base_config(20, 77);
  cfg.delta_b_g = delta_b_for_phase(0.4, cfg.interrogation_s);
  const auto shots = simulate_shots(cfg);
  std::ostringstream os;
  write_shots_csv(os, shots);
  std::istringstream is(os.str());
  const auto pts = read_shots_csv(is);
  REQUIRE(pts.size() == shots.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].x == shots[i].fza);
    CHECK(pts[i].y == shots[i].fzb);
  }
}

}  // TEST_SUITE
