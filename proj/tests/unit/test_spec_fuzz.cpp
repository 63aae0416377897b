// Randomized kernel-tree properties: build random combinator trees over
// positive definite leaves and check the structural guarantees that every
// node is supposed to preserve — bit-exact symmetry, positive
// semidefiniteness of grams, and JSON round-trip stability.

#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "kernelforge/families.hpp"
#include "kernelforge/io.hpp"
#include "kernelforge/kernel_spec.hpp"

using kf::KernelSpec;
using kf::Point;

namespace {

KernelSpec random_pd_leaf(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.3, 2.5);
    switch (rng() % 3) {
        case 0: return kf::gaussian(u(rng));
        case 1: return kf::radial_cm_mixture({{u(rng), u(rng)}, {u(rng), u(rng)}});
        default: return KernelSpec(KernelSpec::Matern{u(rng), u(rng)});
    }
}

KernelSpec random_tree(std::mt19937_64& rng, int depth) {
    if (depth == 0) return random_pd_leaf(rng);
    std::uniform_real_distribution<double> u(0.3, 2.5);
    switch (rng() % 5) {
        case 0: return kf::schur(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 1:
            return kf::mixture({{u(rng), random_tree(rng, depth - 1)},
                                {u(rng), random_tree(rng, depth - 1)}});
        case 2:
            return kf::rescale(random_tree(rng, depth - 1), kf::WeightFn::norm_exp(0.2 * u(rng)));
        case 3:
            return kf::pullback(random_tree(rng, depth - 1), kf::MapFn::scale(u(rng)));
        default:
            // dimension-preserving so nested pullbacks stay composable
            return kf::pullback(random_tree(rng, depth - 1),
                                kf::MapFn::affine({{u(rng), 0.3}, {0.0, u(rng)}}, {0.0, 0.1}));
    }
}

} // namespace

TEST_CASE("random combinator trees keep their structural guarantees") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto rng = kftest::make_rng(5000 + seed);
        std::uniform_int_distribution<int> udepth(1, 3);
        std::uniform_int_distribution<int> usize(2, 24);
        const KernelSpec spec = random_tree(rng, udepth(rng));
        const auto pts = kftest::random_euclidean_points(usize(rng), 2, rng);

        // bit-exact symmetry at random pairs
        for (int i = 0; i < 5; ++i) {
            const Point x = Point::euclidean(kftest::random_vector(2, rng));
            const Point y = Point::euclidean(kftest::random_vector(2, rng));
            CHECK(kf::eval(spec, x, y) == kf::eval(spec, y, x));
        }

        // grams of PD-closed compositions never classify indefinite
        const auto g = kf::gram(spec, pts, true);
        CHECK(g.verdict->cls != kf::PsdClass::INDEFINITE);

        // diagonal dominance of the two-point minor
        for (int i = 0; i < g.matrix.size(); ++i)
            for (int j = 0; j < g.matrix.size(); ++j)
                CHECK(2.0 * std::abs(g.matrix(i, j)) <=
                      g.matrix(i, i) + g.matrix(j, j) + 1e-10);

        // serialization round trip is the identity on the JSON form
        const auto j = kf::io::kernel_to_json(spec);
        const KernelSpec parsed = kf::io::parse_kernel(j);
        CHECK(kf::io::kernel_to_json(parsed) == j);
        const Point x = Point::euclidean(kftest::random_vector(2, rng));
        const Point y = Point::euclidean(kftest::random_vector(2, rng));
        CHECK(kf::eval(parsed, x, y) == kf::eval(spec, x, y));
    }
}
