#include <benchmark/benchmark.h>

#include "sfbif/hamsys.hpp"
#include "sfbif/random.hpp"
#include "sfbif/sfpath.hpp"

namespace {

using namespace sfbif;

void BM_Eigensym(benchmark::State& state) {
  Rng rng(1);
  const SymMatrix s = random_symmetric(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eigensym(s));
}
BENCHMARK(BM_Eigensym)->RangeMultiplier(2)->Range(4, 128);

void BM_Eigenvalues(benchmark::State& state) {
  Rng rng(1);
  const SymMatrix s = random_symmetric(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(s));
}
BENCHMARK(BM_Eigenvalues)->RangeMultiplier(2)->Range(4, 128);

void BM_ExtendedSf(benchmark::State& state) {
  Rng rng(2);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto path = OperatorPath::segment(0.0, 1.0, random_symmetric(rng, n), random_symmetric(rng, n));
  for (auto _ : state) benchmark::DoNotOptimize(extended_sf(path));
}
BENCHMARK(BM_ExtendedSf)->Arg(4)->Arg(16)->Arg(64);

void BM_SpectralFlowScan(benchmark::State& state) {
  Rng rng(3);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto path = OperatorPath::segment(0.0, 1.0, random_invertible(rng, n), random_invertible(rng, n));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_flow(path));
}
BENCHMARK(BM_SpectralFlowScan)->Arg(4)->Arg(8)->Arg(16);

void BM_AssembleHessian(benchmark::State& state) {
  Rng rng(4);
  const TimePeriodicCoeff coeff(random_symmetric(rng, 4), {random_symmetric(rng, 4), random_symmetric(rng, 4)},
                                {random_symmetric(rng, 4)});
  const int truncation = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_hessian(coeff, truncation));
}
BENCHMARK(BM_AssembleHessian)->Arg(4)->Arg(16)->Arg(64);

void BM_GalerkinSf(benchmark::State& state) {
  const auto path = HamiltonianPath::segment(0.0, 1.0, TimePeriodicCoeff(SymMatrix(2), {}, {SymMatrix::identity(2) * 0.2}),
                                             TimePeriodicCoeff(SymMatrix::identity(2) * 2.5, {}, {SymMatrix::identity(2) * 0.2}));
  for (auto _ : state) benchmark::DoNotOptimize(galerkin_sf(path));
}
BENCHMARK(BM_GalerkinSf);

}  // namespace

BENCHMARK_MAIN();
