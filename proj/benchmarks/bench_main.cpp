#include <benchmark/benchmark.h>

#include "hl/bc.hpp"
#include "hl/grid.hpp"
#include "hl/potential.hpp"
#include "hl/scattering.hpp"
#include "hl/solutions.hpp"
#include "hl/transforms.hpp"

namespace {

const hl::PotentialSpec kWell = hl::PotentialSpec::coupled_well(3.0, 5.0, 0.4, 1.5);
const hl::BoundaryPair kBC = hl::kirchhoff_bc(2);

void BM_JostSolution(benchmark::State& state) {
  const double k = static_cast<double>(state.range(0));
  const std::vector<double> grid = hl::linspace(0.0, 2.0, 50);
  for (auto _ : state) {
    auto f = hl::jost_solution(kWell, k, grid);
    benchmark::DoNotOptimize(f.values.back());
  }
}
BENCHMARK(BM_JostSolution)->Arg(1)->Arg(10)->Arg(100);

void BM_SMatrixSweep(benchmark::State& state) {
  const std::vector<double> ks = hl::linspace(0.5, 20.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    double worst = 0;
    for (double k : ks)
      worst = std::max(worst, hl::scattering_matrix(kWell, kBC, k).unitarity_defect);
    benchmark::DoNotOptimize(worst);
  }
}
BENCHMARK(BM_SMatrixSweep)->Arg(8)->Arg(32);

void BM_ResolventAssembly(benchmark::State& state) {
  const std::vector<double> xs = hl::linspace(0.05, 6.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto ker = hl::resolvent_kernel(kWell, kBC, hl::Complex(-2.0, 0.0), xs);
    benchmark::DoNotOptimize(ker.K(0, 0));
  }
}
BENCHMARK(BM_ResolventAssembly)->Arg(40)->Arg(120);

}  // namespace

BENCHMARK_MAIN();
