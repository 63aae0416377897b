#include <benchmark/benchmark.h>

#include <random>

#include "kernelforge/families.hpp"
#include "kernelforge/kernel_spec.hpp"
#include "kernelforge/mmd.hpp"

namespace {

std::vector<kf::Point> sample_points(int n, int d) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<kf::Point> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        std::vector<double> c(d);
        for (double& x : c) x = u(rng);
        pts.push_back(kf::Point::euclidean(std::move(c)));
    }
    return pts;
}

void BM_GramGaussian(benchmark::State& state) {
    const auto pts = sample_points(static_cast<int>(state.range(0)), 5);
    const auto spec = kf::gaussian(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(kf::gram_matrix(spec, pts));
}
BENCHMARK(BM_GramGaussian)->Arg(64)->Arg(128)->Arg(256);

void BM_GramMatern(benchmark::State& state) {
    const auto pts = sample_points(static_cast<int>(state.range(0)), 5);
    const kf::KernelSpec spec(kf::KernelSpec::Matern{1.0, 1.5});
    for (auto _ : state) benchmark::DoNotOptimize(kf::gram_matrix(spec, pts));
}
BENCHMARK(BM_GramMatern)->Arg(64)->Arg(128);

void BM_GramSchurMixture(benchmark::State& state) {
    const auto pts = sample_points(static_cast<int>(state.range(0)), 5);
    const auto spec = kf::schur(kf::gaussian(0.5),
                                kf::radial_cm_mixture({{0.5, 0.5}, {0.5, 2.0}}));
    for (auto _ : state) benchmark::DoNotOptimize(kf::gram_matrix(spec, pts));
}
BENCHMARK(BM_GramSchurMixture)->Arg(128);

void BM_MmdDistance(benchmark::State& state) {
    const auto a = sample_points(static_cast<int>(state.range(0)), 3);
    const auto b = sample_points(static_cast<int>(state.range(0)), 3);
    const auto spec = kf::gaussian(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(kf::mmd_distance(spec, a, b));
}
BENCHMARK(BM_MmdDistance)->Arg(64)->Arg(256);

} // namespace
