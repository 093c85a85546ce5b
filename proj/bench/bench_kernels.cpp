#include <cmath>

#include <benchmark/benchmark.h>

#include "swaa/continuation.hpp"
#include "swaa/derivatives.hpp"
#include "swaa/oracle.hpp"
#include "swaa/scenarios.hpp"

using namespace swaa;

namespace {

struct Fixture {
  Scenario sc = scenarios::waterfall(1.0, 1.0);
  WindowGrid x_grid;
  ProblemSetup setup;
  WindowGrid grid;
  DiagonalHistory seed;

  explicit Fixture(double dx) {
    const double T = 1.0 / (75.0 * std::sqrt(2.0));
    setup = prepare_setup(sc.data, sc.profile, {10.0, dx, T / 7.0, 8}, T, x_grid);
    grid = window_on(x_grid, T, T / 7.0);
    seed = make_seed(setup);
  }
};

Exec exec_of(const benchmark::State& st) { return st.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_InnerSweep(benchmark::State& st) {
  Fixture f(0.005);
  const std::size_t n = 1;
  CharacteristicField in(n, f.grid.nx()), out(n, f.grid.nx());
  for (std::size_t i = 0; i < f.grid.nx(); ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      in.Z_plus(j, i) = f.seed.z_plus[0].values()[i];
      in.Y_plus(j, i) = f.seed.z_minus[0].values()[i];
      in.Z_minus(j, i) = f.seed.z_minus[0].values()[i];
      in.Y_minus(j, i) = f.seed.z_plus[0].values()[i];
    }
  }
  trace_coordinates(in, f.grid, Exec::serial);
  const DiagonalView view{f.seed, f.seed.z_plus[0].values(), f.seed.z_minus[0].values()};
  for (auto _ : st) benchmark::DoNotOptimize(inner_sweep(in, out, view, f.sc.profile, f.grid, exec_of(st)));
}

void BM_FixedTime(benchmark::State& st) {
  Fixture f(0.005);
  SolverOptions o;
  o.exec = exec_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(solve_fixed_time(1, f.seed, f.sc.profile, f.grid, o));
}

void BM_WindowWithDerivatives(benchmark::State& st) {
  Fixture f(0.01);
  SolverOptions o;
  o.exec = exec_of(st);
  const WindowBudget b{0, f.setup.C_phi, f.setup.C_h, 15.0 * f.setup.C_phi};
  for (auto _ : st) benchmark::DoNotOptimize(solve_window_uv(f.seed, f.sc.profile, f.grid, o, b));
}

void BM_Upwind(benchmark::State& st) {
  Fixture f(0.002);
  UpwindOptions o;
  o.exec = exec_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(upwind_reference(f.setup, f.sc.profile, 0.005, o));
}

}  // namespace

BENCHMARK(BM_InnerSweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FixedTime)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WindowWithDerivatives)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Upwind)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
