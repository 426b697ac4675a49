#include <benchmark/benchmark.h>

#include <random>

#include "arcgd/baselines.hpp"
#include "arcgd/mlp.hpp"
#include "arcgd/optimizer.hpp"
#include "arcgd/rosenbrock.hpp"

using namespace arcgd;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

void BM_ArcGDStep(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  ArcGDConfig cfg;
  cfg.adaptive_c = true;
  cfg.use_momentum = true;
  OptimizerState s = make_state(random_vector(n, 1));
  const std::vector<double> g = random_vector(n, 2);
  for (auto _ : state) {
    s = arcgd_step(s, g, cfg);
    benchmark::DoNotOptimize(s.x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_ArcGDStep)->Arg(1000)->Arg(50000);

void BM_AdamStep(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  AdamConfig cfg;
  AdamState s = make_adam_state(n);
  std::vector<double> x = random_vector(n, 1);
  const std::vector<double> g = random_vector(n, 2);
  for (auto _ : state) {
    auto res = adam_step(s, x, g, cfg);
    s = std::move(res.state);
    x = std::move(res.x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_AdamStep)->Arg(1000)->Arg(50000);

void BM_LionStep(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  LionConfig cfg;
  std::vector<double> m(n, 0.0);
  std::vector<double> x = random_vector(n, 1);
  const std::vector<double> g = random_vector(n, 2);
  for (auto _ : state) {
    auto res = lion_step(m, x, g, cfg);
    m = std::move(res.m);
    x = std::move(res.x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_LionStep)->Arg(1000)->Arg(50000);

void BM_RosenbrockGradient(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> x = random_vector(n, 3);
  for (auto _ : state) {
    auto g = rosenbrock_gradient(x);
    benchmark::DoNotOptimize(g.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_RosenbrockGradient)->Arg(1000)->Arg(50000);

void BM_MLPForwardBackward(benchmark::State& state) {
  const MLPArchitecture arch{3072, {32}, 10};
  const MLPParams params = he_normal_init(arch, 1);
  Matrix batch(128, 3072);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (double& v : batch.data) v = dist(rng);
  std::vector<int> labels(128);
  for (std::size_t i = 0; i < labels.size(); ++i)
    labels[i] = static_cast<int>(i % 10);

  for (auto _ : state) {
    ForwardCache cache;
    forward(params, batch, &cache);
    auto grads = backward(params, cache, labels);
    benchmark::DoNotOptimize(grads.weights[0].data.data());
  }
}
BENCHMARK(BM_MLPForwardBackward);

}  // namespace

BENCHMARK_MAIN();
