#include <benchmark/benchmark.h>

#include <vector>

#include "vls/atomprops.hpp"
#include "vls/constants.hpp"
#include "vls/polopt.hpp"
#include "vls/ramsey.hpp"
#include "vls/spinmix.hpp"
#include "vls/trapfield.hpp"

namespace k = vls::constants;

static void BM_Wigner6j(benchmark::State& state) {
  using vls::atomprops::HalfInt;
  for (auto _ : state) {
    benchmark::DoNotOptimize(vls::atomprops::wigner6j(
        HalfInt(4), HalfInt(6), HalfInt(4), HalfInt(3), HalfInt(5), HalfInt(3)));
  }
}
BENCHMARK(BM_Wigner6j);

static void BM_AlphaV(benchmark::State& state) {
  const auto& lines = vls::atomprops::rb87_d_lines();
  const double w = k::two_pi * k::speed_of_light / 1064e-9;
  for (auto _ : state) {
    const auto a1 = vls::atomprops::alpha1_nJ(lines, vls::atomprops::HalfInt(1), w);
    benchmark::DoNotOptimize(
        vls::atomprops::alpha_v_nJF(a1, vls::atomprops::rb87_f1_level()).value_si);
  }
}
BENCHMARK(BM_AlphaV);

static void BM_EllipseFit(benchmark::State& state) {
  vls::ramsey::RamseyConfig cfg;
  cfg.interrogation_s = 0.015;
  cfg.pulse_phases = vls::ramsey::RamseyConfig::phase_grid(state.range(0));
  cfg.contrast_a = cfg.contrast_b = 0.8;
  cfg.readout_sigma = 0.02;
  cfg.delta_b_g = 1e-5;
  cfg.seed = 5;
  const auto shots = vls::ramsey::simulate_shots(cfg);
  std::vector<vls::ramsey::Point2> pts(shots.size());
  for (std::size_t i = 0; i < shots.size(); ++i) pts[i] = {shots[i].fza, shots[i].fzb};
  vls::ramsey::EllipseFitOptions opts;
  opts.bootstrap_samples = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(vls::ramsey::ellipse_fit(pts, opts).delta_phi);
  }
}
BENCHMARK(BM_EllipseFit)->Arg(200)->Arg(500);

static void BM_EvolveSma(benchmark::State& state) {
  vls::spinmix::SpinMixParams p;
  p.gradient_g_per_cm = 0.132;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        vls::spinmix::evolve_sma(vls::spinmix::initial_after_pi2(), p, 0.4, 1e-3)
            .size());
  }
}
BENCHMARK(BM_EvolveSma);

static void BM_TrapMinimum(benchmark::State& state) {
  vls::trapfield::GaussianBeam b;
  b.power_w = 0.55;
  b.waist_m = 67e-6;
  b.wavelength_m = 1064e-9;
  b.direction = {0, 0, 1};
  const std::vector<vls::trapfield::GaussianBeam> beams{b};
  const vls::Vec3 g{0, -k::standard_gravity, 0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        vls::trapfield::trap_minimum(beams, 1.1165e-38, k::rb87::mass, g).y);
  }
}
BENCHMARK(BM_TrapMinimum);

BENCHMARK_MAIN();
