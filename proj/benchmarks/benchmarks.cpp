#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "noisy_bisect/oracles.hpp"
#include "noisy_bisect/posterior.hpp"
#include "noisy_bisect/search.hpp"

namespace {

using noisy_bisect::NoiseModel;
using noisy_bisect::Posterior;
using noisy_bisect::SearchParams;
using noisy_bisect::SimulatedBinaryOracle;

// Alternating answers at a fixed split cancel each other, so the posterior
// never concentrates and the loop can run indefinitely.
void BM_PosteriorUpdate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Posterior post(n);
  int answer = 0;
  for (auto _ : state) {
    post.update_binary(n / 2, answer, 0.75);
    answer = 1 - answer;
    benchmark::DoNotOptimize(post.segment_count());
  }
}
BENCHMARK(BM_PosteriorUpdate)->Arg(1 << 10)->Arg(1 << 16);

// Worst-case split search: a posterior whose weights form ~n segments.
void BM_FindSplit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i)
    weights[i] = 1.0 + static_cast<double>(i * 2654435761u % 97) / 97.0;
  const Posterior post = Posterior::from_weights(weights);
  for (auto _ : state) benchmark::DoNotOptimize(post.find_split(0.49));
}
BENCHMARK(BM_FindSplit)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 16);

void BM_FullSearch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SearchParams params;
  params.n = n;
  params.noise = NoiseModel::binary(0.75);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    SimulatedBinaryOracle oracle(n, n / 3 + 1, 0.75, seed++);
    const auto outcome = noisy_bisect::search_binary(params, oracle);
    benchmark::DoNotOptimize(outcome.queries_used);
  }
}
BENCHMARK(BM_FullSearch)->Arg(1 << 12)->Arg(1 << 16);

}  // namespace

BENCHMARK_MAIN();
