#include <benchmark/benchmark.h>

#include "superconv/solver.hpp"

using namespace superconv;

static void BM_source_solve_fourier(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PotentialSpec v = PotentialSpec::trig_decay(2.5, 256, 1.0);
  const PotentialSpec f = PotentialSpec::trig_decay(1.5, 256, 1.0, 25.0);
  auto s = build_space(DomainSpec::make(Setting::Two), BasisTag::fourier(n),
                       QuadPolicy::for_data(v, f));
  SourceProblem p = SourceProblem::make(s, v, f);
  SolverOptions opts;
  opts.tol = 1e-12;
  for (auto _ : state) {
    SourceSolution sol = solve_source(p, opts);
    benchmark::DoNotOptimize(sol);
  }
}
BENCHMARK(BM_source_solve_fourier)->Arg(64)->Arg(256)->Arg(1024);

static void BM_eigen_solve_fourier(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PotentialSpec v = PotentialSpec::trig_decay(2.5, 256, 1.0);
  auto s = build_space(DomainSpec::make(Setting::Two), BasisTag::fourier(n),
                       QuadPolicy::for_data(v));
  EigProblem p = EigProblem::make(s, v);
  SolverOptions opts;
  opts.tol = 1e-12;
  for (auto _ : state) {
    EigSolution sol = solve_eig(p, opts);
    benchmark::DoNotOptimize(sol);
  }
}
BENCHMARK(BM_eigen_solve_fourier)->Arg(64)->Arg(256);

static void BM_eigen_solve_fem(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const PotentialSpec v = PotentialSpec::polynomial({1.0, 0.0, 1.0});
  auto s = build_space(DomainSpec::make(Setting::One), BasisTag::fem(m, 2),
                       QuadPolicy::for_data(v));
  EigProblem p = EigProblem::make(s, v);
  SolverOptions opts;
  opts.tol = 1e-11;
  for (auto _ : state) {
    EigSolution sol = solve_eig(p, opts);
    benchmark::DoNotOptimize(sol);
  }
}
BENCHMARK(BM_eigen_solve_fem)->Arg(512)->Arg(4096);

BENCHMARK_MAIN();
