#include <benchmark/benchmark.h>

#include <array>

#include "skclt/exact.hpp"
#include "skclt/interpolation.hpp"
#include "skclt/mcmc.hpp"
#include "skclt/qsolver.hpp"

using namespace skclt;

static void exact_gibbs_table(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ModelParams p{0.2, 0.3, n};
  const Disorder d = sample_disorder(1, n);
  for (auto _ : state) benchmark::DoNotOptimize(exact_gibbs(p, d));
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << n));
}
BENCHMARK(exact_gibbs_table)->DenseRange(8, 16, 4);

static void correlator_transform(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GibbsTable t = exact_gibbs({0.2, 0.3, n}, sample_disorder(1, n));
  for (auto _ : state) benchmark::DoNotOptimize(correlators(t));
}
BENCHMARK(correlator_transform)->DenseRange(8, 16, 4);

static void glauber(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DenseModel model(sk_form({0.2, 0.3, n}, sample_disorder(1, n)));
  ChainState chain(model, 7);
  for (auto _ : state) glauber_sweep(chain, model);
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(glauber)->RangeMultiplier(4)->Range(16, 1024);

static void path_quadrature(benchmark::State& state) {
  const double q = solve_q(0.2, 0.3).q;
  const ModelParams p{0.2, 0.3, 3};
  const auto obs = make_observable("sbar-n-sq", WeightVector::uniform(3), q);
  ExpectationPlan plan;
  plan.coupling_nodes = static_cast<int>(state.range(0));
  plan.cavity_nodes = static_cast<int>(state.range(0));
  const std::array<PathQuery, 1> queries{PathQuery{0.5, {obs.poly}}};
  for (auto _ : state) benchmark::DoNotOptimize(sample_path(CavityPath::one, p, q, plan, queries));
}
BENCHMARK(path_quadrature)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
