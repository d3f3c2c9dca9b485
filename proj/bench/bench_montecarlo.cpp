// Serial reference kernels against their OpenMP counterparts.
//
//   ./bench_montecarlo --benchmark_filter=Lambda
//
// The thread count follows OMP_NUM_THREADS; Arg() below is the sample count
// (or search budget).

#include <benchmark/benchmark.h>

#include "collapse_gauge/montecarlo.hpp"
#include "collapse_gauge/random.hpp"
#include "collapse_gauge/search.hpp"

using namespace collapse_gauge;

namespace {

struct Fixture {
  static constexpr int kDim = 6;
  Fixture() {
    Rng rng = make_stream(1, 0);
    effect = random_effect(kDim, rng);
    psi = sample_uniform_state(kDim, rng);
  }
  Effect effect = Effect::zero(kDim);
  PureState psi = PureState::basis(kDim, 0);
  CollapseParams params{0.45, kDim};
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

template <auto Estimate>
void lambda_kernel(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(Estimate(f.effect, f.params, state.range(0), 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Estimate>
void reliability_kernel(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(Estimate(f.psi, f.params, f.effect, state.range(0), 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Search>
void search_kernel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(Search(4, 0.5, state.range(0), SearchStrategy::spectrum_parametrized, 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

using LambdaFn = EstimateWithCI (*)(const Effect&, const CollapseParams&, std::int64_t, std::uint64_t);
using ReliabilityFn = EstimateWithCI (*)(const PureState&, const CollapseParams&, const Effect&,
                                         std::int64_t, std::uint64_t);
using SearchFn = SearchReport (*)(int, double, std::int64_t, SearchStrategy, std::uint64_t);

constexpr LambdaFn kLambdaSerial = &serial::estimate_lambda;
constexpr LambdaFn kLambdaParallel = &estimate_lambda;
constexpr ReliabilityFn kReliabilitySerial = &serial::estimate_reliability;
constexpr ReliabilityFn kReliabilityParallel = &estimate_reliability;
constexpr SearchFn kSearchSerial = &serial::maximize_lambda;
constexpr SearchFn kSearchParallel = &maximize_lambda;

}  // namespace

BENCHMARK(lambda_kernel<kLambdaSerial>)->Name("Lambda/serial")->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(lambda_kernel<kLambdaParallel>)->Name("Lambda/openmp")->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(reliability_kernel<kReliabilitySerial>)->Name("Reliability/serial")->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(reliability_kernel<kReliabilityParallel>)->Name("Reliability/openmp")->Arg(1 << 20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(search_kernel<kSearchSerial>)->Name("Search/serial")->Arg(1 << 12)->Unit(benchmark::kMillisecond);
BENCHMARK(search_kernel<kSearchParallel>)->Name("Search/openmp")->Arg(1 << 12)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
