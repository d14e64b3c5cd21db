// Serial reference kernels against their OpenMP counterparts on the
// client-server full state space.

#include "pepa/ctmc.hpp"
#include "pepa/kernels.hpp"
#include "pepa/parser.hpp"

#include <benchmark/benchmark.h>

#include <string>

namespace {

pepa::GroupedModel client_server(int clients) {
    return pepa::parse_model_file(std::string(PEPA_MODELS_DIR) + "/client_server.pepa",
                                  {{"n_c", static_cast<double>(clients)}});
}

void generate(benchmark::State& state, bool parallel) {
    auto model = client_server(static_cast<int>(state.range(0)));
    pepa::CompiledModel compiled(model);
    std::size_t states = 0;
    for (auto _ : state) {
        auto ctmc = pepa::generate_ctmc(compiled, compiled.initial_state(), {10'000'000, parallel});
        states = ctmc.size();
        benchmark::DoNotOptimize(ctmc.transitions.data());
    }
    state.counters["states"] = static_cast<double>(states);
}

void BM_GenerateSerial(benchmark::State& state) { generate(state, false); }
void BM_GenerateParallel(benchmark::State& state) { generate(state, true); }

void spmv(benchmark::State& state, bool parallel) {
    auto ctmc = pepa::generate_ctmc(client_server(static_cast<int>(state.range(0))));
    auto Q = ctmc.generator().transpose();
    std::vector<double> x(ctmc.size(), 1.0 / static_cast<double>(ctmc.size())), y;
    for (auto _ : state) {
        if (parallel)
            pepa::spmv_parallel(Q, x, y);
        else
            pepa::spmv_serial(Q, x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.counters["nnz"] = static_cast<double>(Q.nonzeros());
}

void BM_SpmvSerial(benchmark::State& state) { spmv(state, false); }
void BM_SpmvParallel(benchmark::State& state) { spmv(state, true); }

} // namespace

BENCHMARK(BM_GenerateSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateParallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpmvSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SpmvParallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
