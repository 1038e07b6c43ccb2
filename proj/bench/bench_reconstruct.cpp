// Serial reference vs OpenMP kernels on the same synthetic workload.

#include <benchmark/benchmark.h>

#include "gdeltrecon/pipeline.hpp"
#include "gdeltrecon/shredder.hpp"
#include "gdeltrecon/similarity.hpp"
#include "support/corpus.hpp"

using namespace gdeltrecon;

namespace {

struct Workload {
    UrlGroups groups;
    std::vector<TextPair> pairs;
};

const Workload& workload() {
    static const Workload w = [] {
        Workload out;
        corpus::Rng rng(7);
        corpus::NewsTextGenerator gen;
        std::uniform_int_distribution<std::size_t> len(200, 800);
        for (int i = 0; i < 64; ++i) {
            const std::string url = "https://bench.example/" + std::to_string(i);
            const std::string text = corpus::join(gen.words(rng, len(rng)));
            ShredConfig sc;
            sc.drop_rate = 0.1;
            sc.seed = static_cast<std::uint64_t>(i);
            out.groups[url] = shred(text, sc, url);
            std::string variant = text.substr(0, text.size() * 9 / 10);
            out.pairs.push_back({variant, text, url});
        }
        return out;
    }();
    return w;
}

void BM_ReconstructSerial(benchmark::State& state) {
    const auto& w = workload();
    for (auto _ : state) benchmark::DoNotOptimize(reconstruct_groups_serial(w.groups, AssemblyConfig{}));
}

void BM_ReconstructParallel(benchmark::State& state) {
    const auto& w = workload();
    const int workers = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(reconstruct_groups(w.groups, AssemblyConfig{}, workers));
}

void BM_ScoreSerial(benchmark::State& state) {
    const auto& w = workload();
    for (auto _ : state) benchmark::DoNotOptimize(score_pairs_serial(w.pairs));
}

void BM_ScoreParallel(benchmark::State& state) {
    const auto& w = workload();
    const int workers = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(score_pairs(w.pairs, workers));
}

}  // namespace

BENCHMARK(BM_ReconstructSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ReconstructParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScoreSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScoreParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
