#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "roughpath/brownian.hpp"
#include "roughpath/path_lift.hpp"
#include "roughpath/rde.hpp"
#include "roughpath/sewing.hpp"
#include "roughpath/tensor.hpp"
#include "roughpath/vector_field.hpp"

namespace rp = roughpath;

namespace {

rp::TruncatedTensor dense_tensor(int dim, int cap, double scale) {
    rp::TruncatedTensor t(dim, cap);
    double v = 0.1;
    for (int k = 1; k <= cap; ++k)
        for (double& x : t.level(k)) {
            x = scale * std::sin(v);
            v += 0.7;
        }
    return t;
}

void BM_TensorMul(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const rp::TruncatedTensor a = dense_tensor(dim, 3, 0.5);
    const rp::TruncatedTensor b = dense_tensor(dim, 3, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(rp::mul(a, b));
}
BENCHMARK(BM_TensorMul)->Arg(2)->Arg(4);

void BM_TensorExp(benchmark::State& state) {
    rp::TruncatedTensor a = dense_tensor(static_cast<int>(state.range(0)), 3, 0.5);
    a.scalar() = 0.0;
    for (auto _ : state) benchmark::DoNotOptimize(rp::exp(a));
}
BENCHMARK(BM_TensorExp)->Arg(2)->Arg(4);

void BM_SignatureLift(benchmark::State& state) {
    const rp::PiecewisePath path = rp::oscillator_path(4, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(rp::signature(path, 2));
}
BENCHMARK(BM_SignatureLift)->Arg(256)->Arg(1024);

void BM_YoungIntegral(benchmark::State& state) {
    std::vector<double> times;
    std::vector<std::vector<double>> xs, ys;
    const int n = 256;
    for (int i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        times.push_back(t);
        xs.push_back({std::sin(t)});
        ys.push_back({t * t});
    }
    const rp::PiecewisePath x(times, xs), y(times, ys);
    for (auto _ : state)
        benchmark::DoNotOptimize(rp::young_integral_scalar(x, y, 0.0, 1.0, 1e-7));
}
BENCHMARK(BM_YoungIntegral);

void BM_MilsteinStep(benchmark::State& state) {
    const rp::VectorFieldSet F(
        2,
        {{rp::parse_expr("sin(x2)"), rp::parse_expr("cos(x1)")},
         {rp::parse_expr("x1 * x2"), rp::parse_expr("x1 - x2")}},
        std::nullopt, 2);
    const rp::PiecewisePath path = rp::oscillator_path(2, 64);
    const rp::RoughPathGrid X = rp::signature(path, 2);
    const rp::TruncatedTensor inc = X.increment(0, X.size() - 1);
    const std::vector<double> x0 = {0.3, -0.2};
    for (auto _ : state)
        benchmark::DoNotOptimize(rp::milstein_step(F, inc, 0.0, 1.0, x0));
}
BENCHMARK(BM_MilsteinStep);

void BM_SolveFlowLinear(benchmark::State& state) {
    const rp::VectorFieldSet F(1, {{rp::parse_expr("x1")}}, std::nullopt, 2);
    std::vector<double> times;
    std::vector<std::vector<double>> vals;
    const int n = 64;
    for (int i = 0; i <= n; ++i) {
        times.push_back(static_cast<double>(i) / n);
        vals.push_back({times.back()});
    }
    const rp::RoughPathGrid X = rp::signature(rp::PiecewisePath(times, vals), 2);
    const std::vector<double> x0 = {1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(rp::solve_flow(F, X, 0.0, 1.0, x0, 1e-8));
}
BENCHMARK(BM_SolveFlowLinear);

void BM_BrownianGenerate(benchmark::State& state) {
    const int depth = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(rp::BrownianSample::generate(2, depth, 1.0, 42));
}
BENCHMARK(BM_BrownianGenerate)->Arg(8)->Arg(12);

void BM_StratonovichLift(benchmark::State& state) {
    const rp::BrownianSample s = rp::BrownianSample::generate(2, 6, 1.0, 42);
    for (auto _ : state) benchmark::DoNotOptimize(rp::stratonovich_lift(s, 4));
}
BENCHMARK(BM_StratonovichLift);

void BM_LevyAreaStats(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(rp::levy_area_stats(200, 6, 1.0, 7));
}
BENCHMARK(BM_LevyAreaStats);

}  // namespace

BENCHMARK_MAIN();
