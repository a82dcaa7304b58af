#include "ancfkit/conversion.hpp"

#include "random_geometry.hpp"

#include <benchmark/benchmark.h>

using namespace ancfkit;
using namespace ancfkit::testing;

static void BM_BezierToAncf(benchmark::State& state)
{
    Rng rng(7);
    const BezierNet net = random_net(rng, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(bezier_to_ancf(net, 1.5, 0.5));
    }
}
BENCHMARK(BM_BezierToAncf)->Args({1, 1})->Args({2, 2})->Args({3, 3});

static void BM_BsplineSegmentToAncf(benchmark::State& state)
{
    Rng rng(8);
    const int p = static_cast<int>(state.range(0));
    const BsplineSurface s = random_surface(rng, p, p);
    const int e = s.segments_u().front();
    const int f = s.segments_v().front();
    for (auto _ : state) {
        benchmark::DoNotOptimize(bspline_segment_to_ancf(s, e, f));
    }
}
BENCHMARK(BM_BsplineSegmentToAncf)->Arg(1)->Arg(2)->Arg(3);

static void BM_ApplyTransform(benchmark::State& state)
{
    Rng rng(9);
    const BezierNet net = random_net(rng, 3, 3);
    const TransformMatrix t = bezier_to_ancf(net).transform;
    for (auto _ : state) {
        benchmark::DoNotOptimize(t.apply(net.points()));
    }
}
BENCHMARK(BM_ApplyTransform);

static void BM_AncfEval(benchmark::State& state)
{
    Rng rng(10);
    const auto elem = bezier_to_ancf(random_net(rng, 3, 3), 2.0, 1.0).element;
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ancf_eval(elem, x, 0.5));
        x = x > 1.9 ? 0.0 : x + 0.01;
    }
}
BENCHMARK(BM_AncfEval);

static void BM_ReduceElement(benchmark::State& state)
{
    Rng rng(11);
    const auto elem = bezier_to_ancf(random_parallelogram_net(rng)).element;
    for (auto _ : state) {
        benchmark::DoNotOptimize(reduce_element(elem, 1e-9));
    }
}
BENCHMARK(BM_ReduceElement);
BENCHMARK_MAIN();
