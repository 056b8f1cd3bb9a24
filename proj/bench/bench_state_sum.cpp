#include "qtrace/engines.hpp"

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

namespace {

using namespace qtrace;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Instance {
    Triangulation T;
    SplitStructure S;
    TanglePresentation P;
    explicit Instance(const std::string& surf, const std::string& tng)
        : T(parse_surface(slurp(std::string(QTRACE_DATA_DIR) + "/" + surf))),
          S(split(T)),
          P(parse_tangle(slurp(std::string(QTRACE_DATA_DIR) + "/" + tng), S)) {}
};

Instance& heavy() {
    static Instance inst("torus.surf", "bench_multicurve.tng");
    return inst;
}

void BM_TraceSerial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(bw_trace_serial(heavy().P));
}

void BM_TraceParallel(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(bw_trace(heavy().P, static_cast<int>(st.range(0))));
}

void BM_HolonomySerial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(trhol_serial(heavy().P));
}

void BM_HolonomyParallel(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(trhol(heavy().P, static_cast<int>(st.range(0))));
}

}  // namespace

BENCHMARK(BM_TraceSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TraceParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HolonomySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HolonomyParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
