#include <benchmark/benchmark.h>

#include "rugose/analysis.hpp"
#include "rugose/bogovskii.hpp"
#include "rugose/solver.hpp"

using namespace rugose;

namespace {

MappedGrid bench_grid(int nx, int nz) {
  return build_grid(
      make_domain_spec(make_profile(ProfileKind::EggCarton, 1, .5, .5), 0.25), nx, nz);
}

}  // namespace

static void BM_profile_eval(benchmark::State& state) {
  const RoughProfile p = make_profile(ProfileKind::EggCarton, 1, .5, .5);
  double acc = 0, y = 0;
  for (auto _ : state) {
    acc += p.value({y, 0.5 * y});
    y += 1e-4;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_profile_eval);

static void BM_grad_phys(benchmark::State& state) {
  const auto g = bench_grid(128, 64);
  Field f(128, 64);
  for (int i = 0; i < 128; ++i)
    for (int k = 0; k < 64; ++k) f(i, k) = g.z_phys(i, k) * std::sin(g.x_center(i));
  for (auto _ : state) {
    const GradField gr = grad_phys(g, f);
    double probe = gr.dx(0, 0);
    benchmark::DoNotOptimize(probe);
  }
}
BENCHMARK(BM_grad_phys);

static void BM_rhs(benchmark::State& state) {
  const auto g = bench_grid(static_cast<int>(state.range(0)), 32);
  const FluidParams p(1.0, 5.0 / 3.0, 1e-3, 0.0);
  State s = init_state(g, Shear{1.0, 1.0, 1.0});
  Rates r(g.nx(), g.nz());
  RhsScratch sc;
  for (auto _ : state) {
    rhs(g, p, s, r, sc);
    double probe = r.rho(0, 0);
    benchmark::DoNotOptimize(probe);
  }
  state.SetItemsProcessed(state.iterations() * g.nx() * g.nz());
}
BENCHMARK(BM_rhs)->Arg(64)->Arg(128)->Arg(256);

static void BM_step(benchmark::State& state) {
  const auto g = bench_grid(128, 32);
  const FluidParams p(1.0, 5.0 / 3.0, 1e-3, 0.0);
  State s = init_state(g, Shear{1.0, 1.0, 1.0});
  StepScratch sc;
  const double dt = cfl_dt(g, p, s, 0.4);
  for (auto _ : state) {
    step(g, p, s, dt, sc);
    double probe = s.rho(0, 0);
    benchmark::DoNotOptimize(probe);
  }
  state.SetItemsProcessed(state.iterations() * g.nx() * g.nz());
}
BENCHMARK(BM_step);

static void BM_trace_ratio_synthetic(benchmark::State& state) {
  const auto g = bench_grid(128, 128);
  const Velocity v = synthetic_slip_field(g, 1);
  for (auto _ : state) {
    const RatioResult r = trace_ratio(g, v);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_trace_ratio_synthetic);

static void BM_bogovskii_solve(benchmark::State& state) {
  const auto g = bench_grid(64, 16);
  Field f(64, 16);
  for (int i = 0; i < 64; ++i)
    for (int k = 0; k < 16; ++k)
      f(i, k) = std::sin(2 * M_PI * g.x_center(i)) * std::sin(M_PI * g.sigma_center(k));
  for (auto _ : state) {
    BogovskiiProblem prob(g, f, 1e-6, 1000);
    const BogovskiiSolution sol = bogovskii_solve(prob);
    benchmark::DoNotOptimize(sol.residual);
  }
}
BENCHMARK(BM_bogovskii_solve);

BENCHMARK_MAIN();
