#include <benchmark/benchmark.h>

#include "xrwave/metrics.hpp"
#include "xrwave/pipeline.hpp"
#include "xrwave/rng.hpp"
#include "xrwave/wavelet.hpp"

using namespace xrwave;

namespace {

Image random_image(int w, int h, std::uint64_t seed) {
    Image img(w, h);
    Rng rng(seed);
    for (double& v : img.data) v = rng.uniform();
    return img;
}

void BM_dwt2d(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Image img = random_image(n, n, 1);
    const WaveletFilter filter =
        state.range(1) == 0 ? WaveletFilter::haar() : WaveletFilter::db2();
    for (auto _ : state) {
        SubbandSet sb = dwt2d(img, filter);
        benchmark::DoNotOptimize(sb.ll.data.data());
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_dwt2d)->Args({64, 0})->Args({64, 1})->Args({256, 0})->Args({256, 1});

void BM_decompose_depth3(benchmark::State& state) {
    const Image img = random_image(256, 256, 2);
    const WaveletFilter filter = WaveletFilter::haar();
    for (auto _ : state) {
        Pyramid pyr = decompose(img, filter, 3);
        benchmark::DoNotOptimize(pyr.final_ll.data.data());
    }
}
BENCHMARK(BM_decompose_depth3);

void BM_resize_bilinear(benchmark::State& state) {
    const Image img = random_image(1024, 1024, 3);
    for (auto _ : state) {
        Image out = resize_bilinear(img, 64, 64);
        benchmark::DoNotOptimize(out.data.data());
    }
}
BENCHMARK(BM_resize_bilinear);

void BM_roc_curve(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    Rng rng(4);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        scores[i] = std::floor(rng.uniform() * 64.0) / 64.0;
        labels[i] = rng.uniform() < 0.3 ? 1 : 0;
    }
    labels[0] = 1;
    labels[n - 1] = 0;
    for (auto _ : state) {
        RocCurve curve = roc_curve(scores, labels);
        benchmark::DoNotOptimize(curve.auc);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_roc_curve)->Arg(1000)->Arg(100000);

} // namespace

BENCHMARK_MAIN();
