// Serial reference kernels against their OpenMP counterparts.
//
//   ./build/bench/gridsel_bench --benchmark_filter=Batch

#include <benchmark/benchmark.h>

#include <random>

#include "gridsel/batch.hpp"
#include "gridsel/congestion.hpp"
#include "gridsel/scenario.hpp"
#include "gridsel/train.hpp"

using namespace gridsel;

namespace {

std::vector<OperatingPoint> operating_points(std::size_t n) {
    const auto net = reference_network();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<OperatingPoint> out;
    for (std::size_t k = 0; k < n; ++k) {
        SubsetChoice c;
        c.off[k % kSolarUnits] = k % 4 == 0;
        out.push_back(make_operating_point(net, 0.7 + 0.6 * u(rng), {100 * u(rng), 90 * u(rng), 90 * u(rng)}, c));
    }
    return out;
}

ml::MatrixXd feature_rows(Eigen::Index n) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> d;
    ml::MatrixXd x(n, static_cast<Eigen::Index>(kFeatureWidth));
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = d(rng);
    return x;
}

void BM_BatchSerial(benchmark::State& state) {
    const auto pts = operating_points(static_cast<std::size_t>(state.range(0)));
    BatchOptions o;
    for (auto _ : state) benchmark::DoNotOptimize(solve_batch_serial(pts, o));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BatchOmp(benchmark::State& state) {
    const auto pts = operating_points(static_cast<std::size_t>(state.range(0)));
    BatchOptions o;
    o.jobs = 0;
    for (auto _ : state) benchmark::DoNotOptimize(solve_batch_omp(pts, o));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PredictSerial(benchmark::State& state) {
    const auto m = ml::Mlp::glorot(kCongestionNnLayers, 3);
    const auto x = feature_rows(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ml::predict_rows_serial(m, x));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PredictOmp(benchmark::State& state) {
    const auto m = ml::Mlp::glorot(kCongestionNnLayers, 3);
    const auto x = feature_rows(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ml::predict_rows_omp(m, x, 0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_BatchSerial)->Arg(64)->Arg(714)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BatchOmp)->Arg(64)->Arg(714)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PredictSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_PredictOmp)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK_MAIN();
