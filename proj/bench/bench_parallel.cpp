#include <benchmark/benchmark.h>

#include <filesystem>

#include "pnrpa/experiment.hpp"
#include "pnrpa/oracle.hpp"
#include "pnrpa/tsptw.hpp"

namespace {

pnrpa::MoTsptwInstance bench_instance(std::size_t n) {
    return pnrpa::generate_secondary_costs(pnrpa::synthesize_classic(n, 60.0, 7), 7);
}

void BM_OracleSerial(benchmark::State& state) {
    const auto instance = bench_instance(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(pnrpa::brute_force_front_serial(instance));
}

void BM_OracleParallel(benchmark::State& state) {
    const auto instance = bench_instance(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(pnrpa::brute_force_front(instance));
}

void run_experiment_bench(benchmark::State& state, int threads) {
    const auto dir = std::filesystem::temp_directory_path() / "pnrpa_bench";
    std::filesystem::create_directories(dir);
    const auto path = dir / "bench_20.tsptw";
    pnrpa::save_instance(bench_instance(20), path);

    pnrpa::ExperimentSpec spec;
    spec.instances = {path};
    spec.n_runs = 8;
    spec.config.eval_budget = 5000;
    spec.normalizer = pnrpa::NormalizerMode::union_of_runs;
    spec.threads = threads;
    for (auto _ : state) benchmark::DoNotOptimize(pnrpa::run_experiment(spec));
}

void BM_RunsSerial(benchmark::State& state) { run_experiment_bench(state, 1); }
void BM_RunsParallel(benchmark::State& state) { run_experiment_bench(state, 0); }

}  // namespace

BENCHMARK(BM_OracleSerial)->Arg(8)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleParallel)->Arg(8)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunsParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
