#include <benchmark/benchmark.h>

#include <map>

#include "etuk/inference.hpp"
#include "etuk/select_top_k.hpp"
#include "etuk/synthetic.hpp"

namespace {

const etuk::SyntheticData& dataset(std::size_t n) {
    static std::map<std::size_t, etuk::SyntheticData> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        etuk::SyntheticSpec spec;
        spec.n = n;
        spec.m = 1000;
        spec.power = 1.5;
        spec.candidates = 50;
        spec.seed = 1;
        it = cache.emplace(n, etuk::generate_synthetic(spec)).first;
    }
    return it->second;
}

void BM_TopK(benchmark::State& state) {
    const auto& d = dataset(static_cast<std::size_t>(state.range(0)));
    etuk::InferenceConfig cfg;
    cfg.k = 5;
    for (auto _ : state) benchmark::DoNotOptimize(etuk::topk_infer(d.probs, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TopK)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_BcaMacroF1(benchmark::State& state) {
    const auto& d = dataset(static_cast<std::size_t>(state.range(0)));
    etuk::InferenceConfig cfg;
    cfg.k = 5;
    cfg.k_prime = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(etuk::bca_infer(d.probs, etuk::MetricSpec::macro_fbeta(1.0), cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
// k_prime = 0 is the dense variant.
BENCHMARK(BM_BcaMacroF1)->Args({2000, 0})->Args({2000, 20})->Args({8000, 20})->Unit(benchmark::kMillisecond);

void BM_BcaCoverage(benchmark::State& state) {
    const auto& d = dataset(static_cast<std::size_t>(state.range(0)));
    etuk::InferenceConfig cfg;
    cfg.k = 5;
    cfg.k_prime = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(etuk::bca_coverage_infer(d.probs, cfg));
}
BENCHMARK(BM_BcaCoverage)->Args({2000, 0})->Args({2000, 20})->Unit(benchmark::kMillisecond);

void BM_Greedy(benchmark::State& state) {
    const auto& d = dataset(2000);
    etuk::InferenceConfig cfg;
    cfg.k = 5;
    for (auto _ : state) benchmark::DoNotOptimize(etuk::greedy_infer(d.probs, etuk::MetricSpec::macro_fbeta(1.0), cfg));
}
BENCHMARK(BM_Greedy)->Unit(benchmark::kMillisecond);

void BM_SelectTopK(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    etuk::Rng rng(3);
    std::vector<double> gains(m);
    for (auto& g : gains) g = rng.uniform();
    for (auto _ : state) benchmark::DoNotOptimize(etuk::select_top_k(gains, 5));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SelectTopK)->Arg(100)->Arg(10000)->Arg(1000000);

}  // namespace
BENCHMARK_MAIN();
