#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "helpers.hpp"
#include "kernelforge/numerics.hpp"

using kf::PsdClass;
using kf::Spectrum;
using kf::SymMatrix;

TEST_CASE("sym_eigen on a diagonal matrix") {
    SymMatrix a(2);
    a.set(0, 0, 2.0);
    a.set(1, 1, 3.0);
    const Spectrum s = kf::sym_eigen(a);
    CHECK(s.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("sym_eigen on the exchange matrix") {
    const SymMatrix a = SymMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    const Spectrum s = kf::sym_eigen(a);
    CHECK(s.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(s.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sym_eigen on the all-ones matrix") {
    const SymMatrix a = SymMatrix::from_rows(
        {{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}});
    const Spectrum s = kf::sym_eigen(a);
    CHECK(std::abs(s.eigenvalues[0]) < 1e-12);
    CHECK(std::abs(s.eigenvalues[1]) < 1e-12);
    CHECK(s.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("sym_eigen rejects non-finite input") {
    CHECK_THROWS_AS(SymMatrix::from_rows({{1.0, std::nan("")}, {std::nan(""), 1.0}}),
                    std::invalid_argument);
}

TEST_CASE("sym_eigen trace identity and reconstruction on random matrices") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto rng = kftest::make_rng(100 + seed);
        const int n = 5 + static_cast<int>(seed) * 5;
        const SymMatrix a = kftest::random_symmetric_matrix(n, rng, 3.0);
        const Spectrum s = kf::sym_eigen(a, true);

        REQUIRE(static_cast<int>(s.eigenvalues.size()) == n);
        for (int i = 0; i + 1 < n; ++i) CHECK(s.eigenvalues[i] <= s.eigenvalues[i + 1]);

        double sum = 0.0;
        for (double l : s.eigenvalues) sum += l;
        CHECK(std::abs(sum - a.trace()) <= 1e-9 * n * std::max(1.0, a.max_abs()));

        // V Lambda V^T reproduces A
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v = 0.0;
                for (int k = 0; k < n; ++k) v += s.vec(i, k) * s.eigenvalues[k] * s.vec(j, k);
                worst = std::max(worst, std::abs(v - a(i, j)));
            }
        CHECK(worst <= 1e-9 * std::max(1.0, a.max_abs()));
    }
}

TEST_CASE("classify_psd on the three canonical instances") {
    const auto id = kf::classify_psd(SymMatrix::identity(2));
    CHECK(id.cls == PsdClass::PD);
    CHECK(id.lambda_min == doctest::Approx(1.0));

    const auto ones = kf::classify_psd(SymMatrix::from_rows({{1.0, 1.0}, {1.0, 1.0}}));
    CHECK(ones.cls == PsdClass::PSD);
    CHECK(std::abs(ones.lambda_min) < 1e-12);

    const auto swap = kf::classify_psd(SymMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
    CHECK(swap.cls == PsdClass::INDEFINITE);
    CHECK(swap.lambda_min == doctest::Approx(-1.0));
}

TEST_CASE("classify_psd verdict fields are consistent") {
    auto rng = kftest::make_rng(7);
    const SymMatrix a = kftest::random_symmetric_matrix(6, rng);
    const auto v = kf::classify_psd(a);
    if (v.cls == PsdClass::PD) CHECK(v.lambda_min > v.tol_used);
    if (v.cls == PsdClass::INDEFINITE) CHECK(v.lambda_min < -v.tol_used);
}

TEST_CASE("PD classification is monotone under diagonal shifts") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto rng = kftest::make_rng(200 + seed);
        const int n = 8;
        // A^T A + n*I is safely PD
        SymMatrix base = kftest::random_symmetric_matrix(n, rng);
        SymMatrix pd(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double s = (i == j) ? n : 0.0;
                for (int k = 0; k < n; ++k) s += base(i, k) * base(k, j);
                pd.set(i, j, s);
            }
        REQUIRE(kf::classify_psd(pd).cls == PsdClass::PD);
        for (double eps : {0.0, 1e-12, 1e-6, 0.1, 1.0}) {
            SymMatrix shifted = pd;
            for (int i = 0; i < n; ++i) shifted.set(i, i, pd(i, i) + eps);
            CHECK(kf::classify_psd(shifted).cls == PsdClass::PD);
        }
    }
}
