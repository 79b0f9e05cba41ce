#include <benchmark/benchmark.h>

#include <string>

#include "utfsr/io.hpp"
#include "utfsr/oracle.hpp"
#include "utfsr/reconstruct.hpp"

using namespace utfsr;

namespace {

Ldim load(const std::string& name) {
    return io::model_from_json(io::read_json_file(std::string(UTFSR_DATA_DIR) + "/models/" + name + ".json"));
}

Ldim random_model(std::size_t n) { return oracle::gen_utf(n, 0.4, 0.3, 11); }

void BM_Psd(benchmark::State& state) {
    const auto m = random_model(static_cast<std::size_t>(state.range(0)));
    const FrequencyGrid grid;
    for (auto _ : state) benchmark::DoNotOptimize(psd(m, grid));
}
BENCHMARK(BM_Psd)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Covariances(benchmark::State& state) {
    const auto s = psd(random_model(8), FrequencyGrid());
    for (auto _ : state) benchmark::DoNotOptimize(covariances_from_psd(s, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Covariances)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CausalWiener(benchmark::State& state) {
    const auto cov = covariances_from_psd(psd(load("diamond"), FrequencyGrid()), 64);
    const RegressorSpec spec(1, {present(0), delayed(2), delayed(3)}, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(causal_wiener(cov, spec));
}
BENCHMARK(BM_CausalWiener)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_MoralBound(benchmark::State& state) {
    const auto s = psd(random_model(static_cast<std::size_t>(state.range(0))), FrequencyGrid());
    for (auto _ : state) benchmark::DoNotOptimize(moral_bound(s));
}
BENCHMARK(BM_MoralBound)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_UtfSrDiamond(benchmark::State& state) {
    const auto s = psd(load("diamond"), FrequencyGrid());
    ReconstructionOptions opts;
    opts.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(utf_sr(s, opts));
}
BENCHMARK(BM_UtfSrDiamond)->Unit(benchmark::kMillisecond);

void BM_UtfSrRandom(benchmark::State& state) {
    const auto s = psd(random_model(static_cast<std::size_t>(state.range(0))), FrequencyGrid());
    ReconstructionOptions opts;
    opts.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(utf_sr(s, opts));
}
BENCHMARK(BM_UtfSrRandom)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
