#include <benchmark/benchmark.h>

#include "reline/cartpole.hpp"
#include "reline/detector.hpp"
#include "reline/nn.hpp"
#include "reline/stats.hpp"

using namespace reline;

static nn::Network make_dense_net() {
    nn::NetworkSpec spec;
    spec.layers = {nn::LayerSpec::dense(64, 128), nn::LayerSpec::relu(), nn::LayerSpec::dense(128, 4)};
    spec.init_seed = 7;
    return nn::Network(spec);
}

static void BM_NetForward(benchmark::State& state) {
    auto net = make_dense_net();
    Tensor input({64});
    for (size_t i = 0; i < input.data.size(); ++i) input.data[i] = 0.01 * static_cast<double>(i);
    for (auto _ : state) benchmark::DoNotOptimize(net.forward(input));
}
BENCHMARK(BM_NetForward);

static void BM_NetBackward(benchmark::State& state) {
    auto net = make_dense_net();
    Tensor input({64});
    for (size_t i = 0; i < input.data.size(); ++i) input.data[i] = 0.01 * static_cast<double>(i);
    for (auto _ : state) {
        nn::ForwardCache cache;
        Tensor out = net.forward(input, &cache);
        auto [loss, grad] = nn::softmax_cross_entropy(out, 1);
        benchmark::DoNotOptimize(net.backward(cache, grad));
    }
}
BENCHMARK(BM_NetBackward);

static void BM_DetectorRecord(benchmark::State& state) {
    Rng rng(3);
    for (auto _ : state) {
        detect::PointSink sink({1.0, 1.0}, 15.0, 11);
        for (long i = 0; i < state.range(0); ++i)
            sink.record(uniform01(rng) * 40.0, uniform01(rng) * 100.0, 10.0 + uniform01(rng) * 10.0,
                        i / 100);
        benchmark::DoNotOptimize(sink.classify());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DetectorRecord)->Arg(10000)->Arg(100000);

static void BM_MannWhitneyExact(benchmark::State& state) {
    std::vector<double> a, b;
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        a.push_back(uniform01(rng));
        b.push_back(uniform01(rng) + 0.2);
    }
    for (auto _ : state) benchmark::DoNotOptimize(stats::mann_whitney(a, b));
}
BENCHMARK(BM_MannWhitneyExact);

static void BM_CartpoleEpisode(benchmark::State& state) {
    CartPoleEnv env{CartPoleConfig{}};
    uint64_t seed = 0;
    for (auto _ : state) {
        env.reset(seed++);
        while (!env.terminal()) benchmark::DoNotOptimize(env.step(seed % 2 ? 1 : 0));
    }
}
BENCHMARK(BM_CartpoleEpisode);

BENCHMARK_MAIN();
