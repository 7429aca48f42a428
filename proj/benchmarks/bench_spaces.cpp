#include <benchmark/benchmark.h>

#include <random>

#include "superconv/space.hpp"
#include "superconv/transfer.hpp"

using namespace superconv;

namespace {

Eigen::VectorXd random_coeffs(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i) c[i] = unit(rng);
  return c;
}

} // namespace

static void BM_fourier_build(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto s = build_space(DomainSpec::make(Setting::Two), BasisTag::fourier(n));
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_fourier_build)->Arg(64)->Arg(256)->Arg(1024);

static void BM_fourier_roundtrip(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto s = build_space(DomainSpec::make(Setting::Two), BasisTag::fourier(n));
  Eigen::VectorXd c = random_coeffs(s->dim(), 1);
  for (auto _ : state) {
    Eigen::VectorXd dual = s->analysis(s->synth(c));
    benchmark::DoNotOptimize(dual);
  }
}
BENCHMARK(BM_fourier_roundtrip)->Arg(64)->Arg(256)->Arg(1024);

static void BM_legendre_build(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto s = build_space(DomainSpec::make(Setting::One), BasisTag::legendre(n));
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_legendre_build)->Arg(32)->Arg(128)->Arg(512);

static void BM_legendre_weighted_mass(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto s = build_space(DomainSpec::make(Setting::One), BasisTag::legendre(n));
  Eigen::VectorXd w = Eigen::VectorXd::Ones(s->quad().size());
  for (auto _ : state) {
    AssembledOp op = s->weighted_mass(w);
    benchmark::DoNotOptimize(op);
  }
}
BENCHMARK(BM_legendre_weighted_mass)->Arg(32)->Arg(128);

static void BM_fem_build(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto s = build_space(DomainSpec::make(Setting::One), BasisTag::fem(m, 2));
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_fem_build)->Arg(256)->Arg(4096)->Arg(32768);

static void BM_projection(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto coarse = build_space(DomainSpec::make(Setting::One), BasisTag::fem(n, 2));
  auto fine = build_space(DomainSpec::make(Setting::One), BasisTag::fem(8 * n, 2));
  Field u(fine->basis(), random_coeffs(fine->dim(), 2));
  for (auto _ : state) {
    Field p = project_x(coarse, fine, u);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_projection)->Arg(64)->Arg(512);

BENCHMARK_MAIN();
