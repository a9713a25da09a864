#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "fedstlf/fedavg.hpp"
#include "fedstlf/lstm.hpp"

namespace {

using namespace fedstlf;

std::vector<double> window(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(12);
  for (auto& v : w) v = u(rng);
  return w;
}

void BM_Forward(benchmark::State& state) {
  const auto h = static_cast<std::size_t>(state.range(0));
  const auto m = nn::init_params(std::vector<std::size_t>{1, h, h}, 1);
  const auto w = window(2);
  for (auto _ : state) benchmark::DoNotOptimize(nn::predict(m, w));
}
BENCHMARK(BM_Forward)->Arg(32)->Arg(200);

void BM_ForwardBackward(benchmark::State& state) {
  const auto h = static_cast<std::size_t>(state.range(0));
  const auto m = nn::init_params(std::vector<std::size_t>{1, h, h}, 1);
  const auto w = window(2);
  auto g = nn::Gradients::zeros_like(m);
  for (auto _ : state) {
    const auto fwd = nn::model_forward(m, w);
    nn::accumulate_backward(m, fwd.cache, nn::mse_loss(fwd.prediction, 0.5).dloss_dpred, g);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(32)->Arg(200);

void BM_Aggregate(benchmark::State& state) {
  const std::vector<std::size_t> widths{1, 200, 200};
  std::vector<fed::LocalUpdate> ups;
  for (int i = 0; i < state.range(0); ++i) {
    ups.push_back({"c" + std::to_string(i), nn::init_params(widths, i), 100u + i, 0.0});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fed::aggregate(ups));
}
BENCHMARK(BM_Aggregate)->Arg(5)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
