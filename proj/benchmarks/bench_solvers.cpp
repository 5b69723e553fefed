#include "parsvm/dataset.hpp"
#include "parsvm/gd_solver.hpp"
#include "parsvm/kernel.hpp"
#include "parsvm/multiclass.hpp"
#include "parsvm/smo_solver.hpp"

#include <benchmark/benchmark.h>

#include <map>

using namespace parsvm;

namespace {

const dataset &spectral(std::size_t k) {
    static std::map<std::size_t, dataset> cache;
    auto it = cache.find(k);
    if (it == cache.end()) {
        it = cache.emplace(k, normalize_zscore(generate_synthetic(9, 102, k, 5.0, 1)).first).first;
    }
    return it->second;
}

void bm_kernel_row(benchmark::State &state) {
    const auto &ds = spectral(static_cast<std::size_t>(state.range(0)));
    const auto spec = kernel_spec::rbf_default(ds.num_features());
    const executor exec{ static_cast<std::size_t>(state.range(1)) };
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel_row(spec, ds.view(), i, &exec));
        i = (i + 1) % ds.num_samples();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ds.num_samples()));
}
BENCHMARK(bm_kernel_row)->Args({ 200, 1 })->Args({ 200, 4 })->Args({ 800, 1 })->Args({ 800, 4 });

void bm_smo_pair(benchmark::State &state) {
    const auto &ds = spectral(static_cast<std::size_t>(state.range(0)));
    const auto problem = build_binary_problem(ds, { 0, 1 });
    smo_config cfg;
    cfg.kernel = kernel_spec::rbf_default(ds.num_features());
    const execution exec{ state.range(1) > 1, static_cast<std::size_t>(state.range(1)) };
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_binary_smo(problem, cfg, exec));
    }
}
BENCHMARK(bm_smo_pair)->Args({ 200, 1 })->Args({ 800, 1 })->Args({ 800, 4 })->Unit(benchmark::kMillisecond);

void bm_gd_pair(benchmark::State &state) {
    const auto &ds = spectral(static_cast<std::size_t>(state.range(0)));
    const auto problem = build_binary_problem(ds, { 0, 1 });
    gd_config cfg;
    cfg.kernel = kernel_spec::rbf_default(ds.num_features());
    cfg.epochs = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_binary_gd(problem, cfg));
    }
}
BENCHMARK(bm_gd_pair)->Args({ 200, 100 })->Args({ 200, 1000 })->Unit(benchmark::kMillisecond);

void bm_one_vs_one(benchmark::State &state) {
    const auto &ds = spectral(static_cast<std::size_t>(state.range(0)));
    trainer_config cfg;
    cfg.smo.kernel = kernel_spec::rbf_default(ds.num_features());
    const pool_config pool{ static_cast<std::size_t>(state.range(1)), schedule::dynamic_queue };
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_one_vs_one(ds, cfg, pool));
    }
}
BENCHMARK(bm_one_vs_one)->Args({ 200, 1 })->Args({ 200, 4 })->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
