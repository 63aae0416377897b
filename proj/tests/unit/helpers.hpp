#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "kernelforge/cnd.hpp"
#include "kernelforge/numerics.hpp"
#include "kernelforge/point.hpp"

namespace kftest {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline std::vector<double> random_vector(int d, std::mt19937_64& rng, double lo = -1.0,
                                         double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(d);
    for (double& x : v) x = u(rng);
    return v;
}

inline std::vector<kf::Point> random_euclidean_points(int n, int d, std::mt19937_64& rng,
                                                      double lo = -2.0, double hi = 2.0) {
    std::vector<kf::Point> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) pts.push_back(kf::Point::euclidean(random_vector(d, rng, lo, hi)));
    return pts;
}

/// Random points with a guaranteed pairwise separation (rejection sampling).
inline std::vector<kf::Point> separated_euclidean_points(int n, int d, std::mt19937_64& rng,
                                                         double box, double min_dist) {
    std::vector<std::vector<double>> coords;
    while (static_cast<int>(coords.size()) < n) {
        auto c = random_vector(d, rng, 0.0, box);
        bool ok = true;
        for (const auto& p : coords)
            if (kf::squared_distance(p, c) < min_dist * min_dist) {
                ok = false;
                break;
            }
        if (ok) coords.push_back(std::move(c));
    }
    std::vector<kf::Point> pts;
    for (auto& c : coords) pts.push_back(kf::Point::euclidean(std::move(c)));
    return pts;
}

inline std::vector<kf::Point> random_hyperboloid_points(int n, int m, std::mt19937_64& rng,
                                                        double radius = 1.5) {
    std::vector<kf::Point> pts;
    pts.reserve(n);
    std::uniform_real_distribution<double> u(-radius, radius);
    for (int i = 0; i < n; ++i) {
        std::vector<double> x(m);
        for (double& v : x) v = u(rng);
        double n2 = 0.0;
        for (double v : x) n2 += v * v;
        pts.push_back(kf::Point::hyperboloid(std::move(x), std::sqrt(1.0 + n2)));
    }
    return pts;
}

/// gamma_ij = |A (x_i - x_j)|^2 + f_i + f_j: conditionally negative definite
/// by construction, metrizable when f >= 0 and the x_i map injectively.
inline kf::SymMatrix random_cnd_matrix(int n, std::mt19937_64& rng, bool with_f = true) {
    const int d = 3;
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::uniform_real_distribution<double> uf(0.0, 1.0);
    std::vector<std::vector<double>> x(n);
    for (auto& p : x) {
        p.resize(d);
        for (double& v : p) v = u(rng);
    }
    std::vector<std::vector<double>> a(d, std::vector<double>(d));
    for (auto& row : a)
        for (double& v : row) v = u(rng);
    std::vector<double> f(n, 0.0);
    if (with_f)
        for (double& v : f) v = uf(rng);

    auto mapped = [&](int i) {
        std::vector<double> y(d, 0.0);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) y[r] += a[r][c] * x[i][c];
        return y;
    };
    std::vector<std::vector<double>> h(n);
    for (int i = 0; i < n; ++i) h[i] = mapped(i);

    kf::SymMatrix g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            g.set(i, j, kf::squared_distance(h[i], h[j]) + f[i] + f[j]);
    return g;
}

inline kf::SymMatrix random_symmetric_matrix(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    kf::SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m.set(i, j, u(rng));
    return m;
}

/// Random symmetric matrix that is clearly not CND (resamples until the
/// projected spectrum sticks out by a margin).
inline kf::SymMatrix random_non_cnd_matrix(int n, std::mt19937_64& rng) {
    for (;;) {
        kf::SymMatrix m = random_symmetric_matrix(n, rng);
        const kf::CndReport r = kf::check_cnd(m);
        if (!r.is_cnd && r.lambda_max_projected > 0.05 * std::max(1.0, m.max_abs())) return m;
    }
}

/// Max of the quadratic form over random unit-norm zero-sum weights; a
/// sampling (one-sided) oracle for the CND predicate.
inline double brute_force_hyperplane_max(const kf::SymMatrix& g, int trials,
                                         std::mt19937_64& rng) {
    const int n = g.size();
    std::normal_distribution<double> gauss;
    double best = -1e300;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> c(n);
        double mean = 0.0;
        for (double& v : c) {
            v = gauss(rng);
            mean += v;
        }
        mean /= n;
        double norm = 0.0;
        for (double& v : c) {
            v -= mean;
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        double q = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) q += (c[i] / norm) * (c[j] / norm) * g(i, j);
        best = std::max(best, q);
    }
    return best;
}

} // namespace kftest
