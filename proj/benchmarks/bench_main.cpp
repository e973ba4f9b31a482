#include <benchmark/benchmark.h>

#include "gshift/linalg.hpp"
#include "gshift/mixture.hpp"
#include "gshift/perturbation.hpp"

using namespace gshift;

namespace {

void BM_EchelonInsert(benchmark::State& state) {
  const auto n = static_cast<Coord>(state.range(0));
  for (auto _ : state) {
    EchelonBasis basis;
    for (Coord k = 1; k <= n; ++k) {
      SparseVector v;
      for (Coord j = k; j <= std::min(n, k + 3); ++j) v.set(j, Scalar(Rational(j, k + 1)));
      basis.insert(v);
    }
    benchmark::DoNotOptimize(basis.size());
  }
}
BENCHMARK(BM_EchelonInsert)->Arg(16)->Arg(64)->Arg(256);

void BM_RecognizeBackwardShift(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  DenseMatrix m(n, n);
  for (std::size_t k = 0; k + 1 < n; ++k) m(k, k + 1) = Scalar(Rational(1, static_cast<long>(k + 2)));
  const auto op = dense_block(1, m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(recognize_generalized_shift(op, AdaptedSet::standard_chain(), n).verdict);
  }
}
BENCHMARK(BM_RecognizeBackwardShift)->Arg(16)->Arg(64);

void BM_AssembleJordanFive(benchmark::State& state) {
  const auto s = nilpotent_model({{5, 1}});
  ChainBuildOptions options;
  options.chains = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const auto family = build_chains(s, standard_provider(), options);
    benchmark::DoNotOptimize(assemble_one_shift(s, family, Rational(1, 10)).distance_bound);
  }
}
BENCHMARK(BM_AssembleJordanFive)->Arg(8)->Arg(40);

void BM_MixturePipeline(benchmark::State& state) {
  MixtureSpec spec;
  spec.forward.push_back(WeightSequence::rule(TailRule::one_over_n()));
  MixtureApproximationOptions options;
  options.horizon = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(approximate_mixture_by_one_shift(spec, Rational(1, 5), options).result.distance_bound);
  }
}
BENCHMARK(BM_MixturePipeline)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
