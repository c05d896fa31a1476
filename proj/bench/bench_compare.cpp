// Parallel kernels against their serial references on fixed workloads.

#include <benchmark/benchmark.h>

#include <vector>

#include "pure/clustering.hpp"
#include "pure/geometry.hpp"
#include "pure/pipeline.hpp"
#include "pure/rng.hpp"
#include "pure/simulator.hpp"
#include "ref.hpp"

namespace {

const pure::SimulatedDataset& batch() {
    static const pure::SimulatedDataset data = [] {
        pure::SceneSpec spec;
        spec.seed = 7001;
        pure::NoiseModel noise;
        noise.corner_sigma = 6.0;
        noise.miss_rate = 0.1;
        noise.spurious_rate = 1.0;
        noise.seed = 7002;
        return pure::simulate_dataset(spec, noise, 64, 20, false);
    }();
    return data;
}

// Gaussian blobs so DBSCAN does real cluster expansion work.
const std::vector<pure::Point2>& blob_points() {
    static const std::vector<pure::Point2> pts = [] {
        pure::CounterRng rng(7101);
        std::vector<pure::Point2> out;
        out.reserve(2000);
        for (int blob = 0; blob < 40; ++blob) {
            const double cx = rng.next_uniform(200.0, 4800.0);
            const double cy = rng.next_uniform(200.0, 4800.0);
            for (int i = 0; i < 50; ++i)
                out.push_back({cx + rng.next_gaussian(20.0), cy + rng.next_gaussian(20.0)});
        }
        return out;
    }();
    return pts;
}

const std::vector<pure::Point2>& hull_points() {
    static const std::vector<pure::Point2> pts = [] {
        pure::CounterRng rng(7201);
        std::vector<pure::Point2> out;
        out.reserve(512);
        for (int i = 0; i < 512; ++i)
            out.push_back({rng.next_uniform(0.0, 1000.0), rng.next_uniform(0.0, 1000.0)});
        return out;
    }();
    return pts;
}

void BM_QuantifyBatchSerial(benchmark::State& state) {
    const auto& data = batch();
    for (auto _ : state) {
        auto rows = pure::quantify_images(data.predictions, {100.0, 3}, false);
        benchmark::DoNotOptimize(rows);
    }
}
BENCHMARK(BM_QuantifyBatchSerial)->Unit(benchmark::kMillisecond);

void BM_QuantifyBatchParallel(benchmark::State& state) {
    const auto& data = batch();
    for (auto _ : state) {
        auto rows = pure::quantify_images(data.predictions, {100.0, 3}, true);
        benchmark::DoNotOptimize(rows);
    }
}
BENCHMARK(BM_QuantifyBatchParallel)->Unit(benchmark::kMillisecond);

void BM_Dbscan(benchmark::State& state) {
    const auto& pts = blob_points();
    for (auto _ : state) {
        auto labels = pure::dbscan(pts, {100.0, 3});
        benchmark::DoNotOptimize(labels);
    }
}
BENCHMARK(BM_Dbscan)->Unit(benchmark::kMillisecond);

void BM_DbscanNaive(benchmark::State& state) {
    const auto& pts = blob_points();
    for (auto _ : state) {
        auto labels = pure::ref::dbscan_naive(pts, {100.0, 3});
        benchmark::DoNotOptimize(labels);
    }
}
BENCHMARK(BM_DbscanNaive)->Unit(benchmark::kMillisecond);

void BM_ConvexHull(benchmark::State& state) {
    const auto& pts = hull_points();
    for (auto _ : state) {
        auto hull = pure::convex_hull(pts);
        benchmark::DoNotOptimize(hull);
    }
}
BENCHMARK(BM_ConvexHull);

void BM_GiftWrapHull(benchmark::State& state) {
    const auto& pts = hull_points();
    for (auto _ : state) {
        auto hull = pure::ref::gift_wrap_hull(pts);
        benchmark::DoNotOptimize(hull);
    }
}
BENCHMARK(BM_GiftWrapHull);

}  // namespace

BENCHMARK_MAIN();
