#include "needd/needlet_frame.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <map>

using namespace needd;

namespace
{

const NeedletFrame& frame_for(int jmax)
{
    static std::map<int, NeedletFrame> cache;
    auto it = cache.find(jmax);
    if (it == cache.end())
        it = cache
                 .emplace(jmax, build_frame(BasisFamily::jacobi(JacobiParams::make(0.0, 1.0)),
                                            Filter(make_profile(ProfileKind::PolynomialShape, 2)), jmax))
                 .first;
    return it->second;
}

std::vector<double> signal(std::size_t n)
{
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = std::cos(0.1 * static_cast<double>(i)) / (1.0 + static_cast<double>(i));
    return f;
}

void BM_analyze_serial(benchmark::State& state)
{
    const auto& frame = frame_for(static_cast<int>(state.range(0)));
    const auto f = signal(frame.dimension());
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::analyze(frame, f));
}

void BM_analyze_omp(benchmark::State& state)
{
    const auto& frame = frame_for(static_cast<int>(state.range(0)));
    const auto f = signal(frame.dimension());
    for (auto _ : state)
        benchmark::DoNotOptimize(analyze(frame, f));
}

void BM_synthesize_serial(benchmark::State& state)
{
    const auto& frame = frame_for(static_cast<int>(state.range(0)));
    const auto beta = analyze(frame, signal(frame.dimension()));
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::synthesize(frame, beta));
}

void BM_synthesize_omp(benchmark::State& state)
{
    const auto& frame = frame_for(static_cast<int>(state.range(0)));
    const auto beta = analyze(frame, signal(frame.dimension()));
    for (auto _ : state)
        benchmark::DoNotOptimize(synthesize(frame, beta));
}

} // namespace

BENCHMARK(BM_analyze_serial)->DenseRange(6, 10, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_analyze_omp)->DenseRange(6, 10, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_synthesize_serial)->DenseRange(6, 10, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_synthesize_omp)->DenseRange(6, 10, 2)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
