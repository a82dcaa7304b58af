#include "ancfkit/bspline.hpp"

#include <benchmark/benchmark.h>

using namespace ancfkit;

namespace {

const KnotVector& knots()
{
    static const KnotVector kv({0, 0.5, 1.25, 2, 3.5, 4, 5.5, 6, 7.25});
    return kv;
}

} // namespace

// All nonzero bases on one span: closed form versus the recursion.
static void BM_SegmentBasis(benchmark::State& state)
{
    const int p = static_cast<int>(state.range(0));
    double t = 2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(segment_basis(knots(), p, 3, t));
        t = t >= 3.4 ? 2.0 : t + 0.01;
    }
}
BENCHMARK(BM_SegmentBasis)->Arg(1)->Arg(2)->Arg(3);

static void BM_CoxDeBoorSpan(benchmark::State& state)
{
    const int p = static_cast<int>(state.range(0));
    double t = 2.0;
    for (auto _ : state) {
        double sum = 0.0;
        for (int i = 3 - p; i <= 3; ++i) {
            sum += cox_de_boor(knots(), i, p, t);
        }
        benchmark::DoNotOptimize(sum);
        t = t >= 3.4 ? 2.0 : t + 0.01;
    }
}
BENCHMARK(BM_CoxDeBoorSpan)->Arg(1)->Arg(2)->Arg(3);

static void BM_EndpointTables(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(endpoint_tables(knots(), 3, 3));
    }
}
BENCHMARK(BM_EndpointTables);
