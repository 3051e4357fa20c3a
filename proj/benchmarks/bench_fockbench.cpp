#include <benchmark/benchmark.h>

#include "fockbench/homodyne.hpp"

using namespace fockbench;

static void BM_BeamsplitterBuild(benchmark::State& state) {
  int T = static_cast<int>(state.range(0));
  for (auto _ : state) {
    BlockOperator u = beamsplitter(0.37, T);
    benchmark::DoNotOptimize(u.blocks.back().data());
  }
}
BENCHMARK(BM_BeamsplitterBuild)->Arg(16)->Arg(48)->Arg(96)->Arg(144);

static void BM_OutcomeDistribution(benchmark::State& state) {
  int T = static_cast<int>(state.range(0));
  double mag = std::sqrt(static_cast<double>(T)) / 2.0;
  FockState sig =
      coherent_state(CoherentParams(Complex(0.5, 0.0)), T + 1).state;
  FockState lo = coherent_state(CoherentParams(Complex(mag, 0.0)), T + 1).state;
  MultiModeState s = tensor(sig, lo, T).state;
  for (auto _ : state) {
    OutcomeDistribution d = outcome_distribution(s);
    benchmark::DoNotOptimize(d.total);
  }
}
BENCHMARK(BM_OutcomeDistribution)->Arg(32)->Arg(64)->Arg(128);

static void BM_ConditionalKernel(benchmark::State& state) {
  double mag = static_cast<double>(state.range(0));
  int T = default_coherent_cutoff(mag);
  for (auto _ : state) {
    CollapseKernel k =
        conditional_kernel(0, CoherentParams(Complex(mag, 0.0)), 6, T);
    benchmark::DoNotOptimize(k.matrix.data());
  }
}
BENCHMARK(BM_ConditionalKernel)->Arg(2)->Arg(4)->Arg(8);

static void BM_QuadratureIntervalProjector(benchmark::State& state) {
  int cutoff = static_cast<int>(state.range(0));
  for (auto _ : state) {
    DenseOperator p = quadrature_interval_projector(0.0, -1.0, 1.0, cutoff);
    benchmark::DoNotOptimize(p.m.data());
  }
}
BENCHMARK(BM_QuadratureIntervalProjector)->Arg(16)->Arg(40)->Arg(80);

int main(int argc, char** argv) {
  ::benchmark::Initialize(&argc, argv);
  ::benchmark::RunSpecifiedBenchmarks();
  return 0;
}
