#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "mvr/train/infonce.hpp"
#include "mvr/train/trainer.hpp"

namespace {

void BM_LossGradient(benchmark::State& state) {
    const auto b = static_cast<std::size_t>(state.range(0));
    const auto d = static_cast<std::size_t>(state.range(1));
    mvr::testing::Random rng(5);
    std::vector<mvr::EmbeddingVector> x, t;
    for (std::size_t i = 0; i < b; ++i) {
        x.push_back(rng.vector(d));
        t.push_back(rng.vector(d));
    }
    const mvr::train::AdapterParams params{mvr::train::Matrix::identity(d, d), 0.05};
    for (auto _ : state) {
        auto g = mvr::train::loss_gradient(x, t, params);
        benchmark::DoNotOptimize(g);
    }
}
BENCHMARK(BM_LossGradient)->ArgsProduct({{32, 256}, {16, 64, 256}})->Unit(benchmark::kMicrosecond);

void BM_TrainEpoch(benchmark::State& state) {
    const auto data = mvr::testing::planted_alignment(6, 256, 0, 16);
    mvr::train::TrainConfig config;
    config.epochs = 1;
    for (auto _ : state) {
        auto r = mvr::train::train_adapter(data.train, config);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

}  // namespace
