#include <benchmark/benchmark.h>

#include <random>

#include "kernelforge/families.hpp"
#include "kernelforge/numerics.hpp"
#include "kernelforge/special_functions.hpp"

namespace {

kf::SymMatrix random_sym(int n) {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    kf::SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m.set(i, j, u(rng));
    return m;
}

void BM_JacobiEigen(benchmark::State& state) {
    const auto m = random_sym(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kf::sym_eigen(m));
}
BENCHMARK(BM_JacobiEigen)->Arg(32)->Arg(64)->Arg(128)->Arg(256);

void BM_JacobiEigenVectors(benchmark::State& state) {
    const auto m = random_sym(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kf::sym_eigen(m, true));
}
BENCHMARK(BM_JacobiEigenVectors)->Arg(64)->Arg(128);

void BM_BesselK(benchmark::State& state) {
    double nu = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kf::bessel_k(nu, 1.7));
        nu = (nu < 25.0) ? nu + 0.1 : 0.3;
    }
}
BENCHMARK(BM_BesselK);

void BM_MaternClosedForm(benchmark::State& state) {
    double r = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kf::matern(r, {1.0, 1.7}));
        r = (r < 10.0) ? r + 0.01 : 0.01;
    }
}
BENCHMARK(BM_MaternClosedForm);

void BM_MaternOracle(benchmark::State& state) {
    double r = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kf::matern_oracle(r, {1.0, 1.7}));
        r = (r < 10.0) ? r + 0.1 : 0.1;
    }
}
BENCHMARK(BM_MaternOracle);

} // namespace

BENCHMARK_MAIN();
