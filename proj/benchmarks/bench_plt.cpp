#include <benchmark/benchmark.h>

#include <cmath>

#include "etuk/astar.hpp"
#include "etuk/label_tree.hpp"
#include "etuk/rng.hpp"

namespace {

// Complete tree of the given arity with m leaves at the bottom level, and
// scores that make a few branches likely, as a trained tree would.
struct Fixture {
    etuk::LabelTree tree;
    std::vector<std::vector<double>> scores;
};

Fixture make_fixture(std::size_t arity, std::size_t depth) {
    std::vector<std::int64_t> parents{-1};
    std::vector<etuk::node_t> level{0};
    for (std::size_t d = 0; d < depth; ++d) {
        std::vector<etuk::node_t> next;
        for (auto v : level)
            for (std::size_t c = 0; c < arity; ++c) {
                next.push_back(static_cast<etuk::node_t>(parents.size()));
                parents.push_back(v);
            }
        level = std::move(next);
    }
    std::vector<std::pair<etuk::node_t, etuk::label_t>> leaves;
    for (std::size_t j = 0; j < level.size(); ++j) leaves.emplace_back(level[j], static_cast<etuk::label_t>(j));
    Fixture f{etuk::LabelTree(parents, leaves, level.size()), {}};
    etuk::Rng rng(7);
    for (int i = 0; i < 64; ++i) {
        std::vector<double> s(parents.size());
        for (auto& v : s) v = std::pow(rng.uniform(), 4.0);
        s[0] = 1.0;
        f.scores.push_back(std::move(s));
    }
    return f;
}

const Fixture& fixture() {
    static const Fixture f = make_fixture(4, 7);  // 16384 labels
    return f;
}

void BM_AStar(benchmark::State& state) {
    const auto& f = fixture();
    const auto gain = etuk::GainSpec::weighted(std::vector<double>(f.tree.labels(), 1.0));
    const etuk::SubtreeBound bound(f.tree, gain);
    const auto k = static_cast<std::size_t>(state.range(0));
    std::size_t i = 0, expansions = 0;
    for (auto _ : state) {
        auto r = etuk::astar_top_k(f.tree, f.scores[i++ % f.scores.size()], bound, k);
        expansions += r.expansions;
        benchmark::DoNotOptimize(r);
    }
    state.counters["expansions"] = benchmark::Counter(static_cast<double>(expansions), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_AStar)->Arg(1)->Arg(5)->Arg(20);

void BM_Exhaustive(benchmark::State& state) {
    const auto& f = fixture();
    const auto gain = etuk::GainSpec::weighted(std::vector<double>(f.tree.labels(), 1.0));
    const auto k = static_cast<std::size_t>(state.range(0));
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(etuk::exhaustive_top_k(f.tree, f.scores[i++ % f.scores.size()], gain, k));
}
BENCHMARK(BM_Exhaustive)->Arg(5);

}  // namespace
