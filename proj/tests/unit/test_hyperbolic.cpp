#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "helpers.hpp"
#include "kernelforge/hyperbolic.hpp"

using kf::Point;
using kf::SymMatrix;

TEST_CASE("lift and project") {
    const Point base = kf::lift({0.0, 0.0});
    CHECK(base.as_hyperboloid().t == 1.0);

    // |x| = sqrt(3) lifts to t = 2
    const Point p = kf::lift({1.0, 1.0, 1.0});
    CHECK(p.as_hyperboloid().t == doctest::Approx(2.0).epsilon(1e-15));

    const std::vector<double> x = {0.3, -1.2, 0.8};
    CHECK(kf::project(kf::lift(x)) == x);
}

TEST_CASE("hyperboloid constraint is validated and renormalized") {
    CHECK_THROWS_AS(Point::hyperboloid({1.0}, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(Point::hyperboloid({1.0}, -std::sqrt(2.0)), std::invalid_argument);
    const Point p = Point::hyperboloid({1.0}, std::sqrt(2.0) + 5e-9);
    CHECK(p.as_hyperboloid().t == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("Lorentzian pairing basics") {
    const Point z = Point::hyperboloid({0.0}, 1.0);
    const Point w = Point::hyperboloid({std::sinh(1.0)}, std::cosh(1.0));

    CHECK(kf::minkowski_form(z, z) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(kf::minkowski_form(z, w) == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
    CHECK(kf::minkowski_form(z, w) == kf::minkowski_form(w, z));

    CHECK_THROWS_AS(kf::minkowski_form(z, kf::lift({0.0, 0.0})), std::invalid_argument);
}

TEST_CASE("geodesic distance") {
    const Point z = Point::hyperboloid({0.0}, 1.0);
    const Point w = Point::hyperboloid({std::sinh(1.0)}, std::cosh(1.0));

    CHECK(kf::hyperbolic_distance(z, z) == 0.0);
    CHECK(kf::hyperbolic_distance(z, w) == doctest::Approx(1.0).epsilon(1e-12));

    // grows monotonically with the chart norm
    double prev = -1.0;
    for (double r : {0.0, 0.2, 0.5, 1.0, 2.0, 5.0}) {
        const double d = kf::hyperbolic_distance(kf::lift({0.0}), kf::lift({r}));
        CHECK(d > prev);
        prev = d;
    }

    // triangle inequality on random triples
    auto rng = kftest::make_rng(91);
    for (int i = 0; i < 30; ++i) {
        const auto pts = kftest::random_hyperboloid_points(3, 2, rng);
        const double dab = kf::hyperbolic_distance(pts[0], pts[1]);
        const double dbc = kf::hyperbolic_distance(pts[1], pts[2]);
        const double dac = kf::hyperbolic_distance(pts[0], pts[2]);
        CHECK(dac <= dab + dbc + 1e-12);
    }

    // near-diagonal accuracy of the series branch: d(z, w) ~ chart gap
    const double eps = 1e-6;
    const double d = kf::hyperbolic_distance(kf::lift({0.0}), kf::lift({eps}));
    CHECK(d == doctest::Approx(eps).epsilon(1e-9));
}

TEST_CASE("reciprocal-power kernel on the sheet") {
    CHECK_THROWS_AS(kf::sech_power_kernel(0.0), std::invalid_argument);

    const Point z = Point::hyperboloid({0.0}, 1.0);
    const Point w = Point::hyperboloid({std::sinh(1.0)}, std::cosh(1.0));
    const auto k2 = kf::sech_power_kernel(2.0);

    CHECK(kf::eval(k2, z, z) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kf::eval(k2, z, w) ==
          doctest::Approx(1.0 / (std::cosh(1.0) * std::cosh(1.0))).epsilon(1e-14));
}

TEST_CASE("reciprocal powers match sech powers of the distance") {
    auto rng = kftest::make_rng(93);
    for (int i = 0; i < 50; ++i) {
        const auto pts = kftest::random_hyperboloid_points(2, 3, rng);
        const double d = kf::hyperbolic_distance(pts[0], pts[1]);
        for (double r : {0.5, 1.0, 2.0, 7.0}) {
            const double direct = kf::eval(kf::sech_power_kernel(r), pts[0], pts[1]);
            const double via_d = std::pow(1.0 / std::cosh(d), r);
            CHECK(std::abs(direct - via_d) <= 1e-12 * std::max(direct, via_d));
        }
    }
}

TEST_CASE("reciprocal-power grams on distinct sheet samples are strictly positive definite") {
    auto rng = kftest::make_rng(95);
    const auto pts = kftest::random_hyperboloid_points(40, 3, rng, 2.0);
    const auto g = kf::gram(kf::sech_power_kernel(1.0), pts, true);
    CHECK(g.verdict->cls == kf::PsdClass::PD);
}

TEST_CASE("isotropic mixtures on the sheet") {
    const Point z = Point::hyperboloid({0.0}, 1.0);
    const Point w = Point::hyperboloid({std::sinh(1.0)}, std::cosh(1.0));

    // single atom is exactly the reciprocal power
    const auto single = kf::isotropic_kernel({{{1.0, 1.3}}});
    CHECK(kf::eval(single, z, w) == kf::eval(kf::sech_power_kernel(1.3), z, w));

    // constant-only mixture: positive definite but flagged non-strict
    const auto flat = kf::isotropic_kernel({{{1.0, 0.0}}});
    CHECK(kf::eval(flat, z, w) == 1.0);
    REQUIRE(flat.get_if<kf::KernelSpec::Isotropic>() != nullptr);
    CHECK_FALSE(flat.get_if<kf::KernelSpec::Isotropic>()->strict);

    const auto mix = kf::isotropic_kernel({{{0.5, 1.0}, {0.5, 3.0}}});
    const double c = std::cosh(1.0);
    CHECK(kf::eval(mix, z, w) == doctest::Approx(0.5 / c + 0.5 / (c * c * c)).epsilon(1e-12));

    CHECK_THROWS_AS(kf::isotropic_kernel({{{0.0, 1.0}}}), std::invalid_argument);

    // strict mixtures stay strictly positive definite on distinct samples
    auto rng = kftest::make_rng(97);
    const auto pts = kftest::random_hyperboloid_points(30, 2, rng);
    CHECK(kf::gram(mix, pts, true).verdict->cls == kf::PsdClass::PD);
}

namespace {

SymMatrix minkowski_gram(const std::vector<Point>& pts) {
    const int n = static_cast<int>(pts.size());
    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m.set(i, j, kf::minkowski_form(pts[i], pts[j]));
    return m;
}

} // namespace

TEST_CASE("the Lorentzian pairing passes the pivot test on every sample") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto rng = kftest::make_rng(1500 + seed);
        std::uniform_int_distribution<int> usize(2, 30);
        const auto pts = kftest::random_hyperboloid_points(usize(rng), 3, rng);
        const auto r = kf::check_hyperbolic(minkowski_gram(pts));
        CHECK(r.verdict);
    }
}

TEST_CASE("one plus a zero-diagonal CND kernel passes the pivot test") {
    auto rng = kftest::make_rng(101);
    const auto pts = kftest::random_euclidean_points(8, 2, rng);
    const int n = 8;
    SymMatrix beta(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            beta.set(i, j, 1.0 + kf::squared_distance(pts[i].as_euclidean().coords,
                                                      pts[j].as_euclidean().coords));
    CHECK(kf::check_hyperbolic(beta).verdict);
}

TEST_CASE("a perturbed diagonal defeats the pivot test") {
    auto rng = kftest::make_rng(103);
    const auto pts = kftest::random_hyperboloid_points(6, 2, rng);
    SymMatrix beta = minkowski_gram(pts);
    beta.set(2, 2, 2.0);
    const auto r = kf::check_hyperbolic(beta);
    CHECK_FALSE(r.verdict);
    REQUIRE(r.witness_indices.has_value());
    CHECK(r.witness_indices->front() == 2);
}

TEST_CASE("log-conditional checks") {
    SUBCASE("the all-ones matrix passes trivially") {
        const SymMatrix ones = SymMatrix::from_rows(
            {{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}});
        const auto r = kf::check_log_conditional(ones);
        CHECK(r.verdict);
        CHECK_FALSE(r.metrizable.verdict); // log is identically zero
    }
    SUBCASE("exponentiated squared distances pass") {
        auto rng = kftest::make_rng(105);
        const auto pts = kftest::random_euclidean_points(7, 2, rng);
        const int n = 7;
        SymMatrix L(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                L.set(i, j, std::exp(kf::squared_distance(pts[i].as_euclidean().coords,
                                                          pts[j].as_euclidean().coords)));
        const auto r = kf::check_log_conditional(L);
        CHECK(r.verdict);
        CHECK(r.metrizable.verdict);
    }
    SUBCASE("the Lorentzian pairing gram is log-conditional and metrizable") {
        auto rng = kftest::make_rng(107);
        const auto pts = kftest::random_hyperboloid_points(10, 3, rng);
        const auto r = kf::check_log_conditional(minkowski_gram(pts));
        CHECK(r.verdict);
        CHECK(r.metrizable.verdict);
    }
    SUBCASE("entries below one are a domain error") {
        const SymMatrix bad = SymMatrix::from_rows({{1.0, 0.5}, {0.5, 1.0}});
        CHECK_THROWS_AS(kf::check_log_conditional(bad), std::domain_error);
    }
}

TEST_CASE("log-conditional is closed under entrywise powers") {
    auto rng = kftest::make_rng(109);
    const auto pts = kftest::random_hyperboloid_points(8, 2, rng);
    const SymMatrix L = minkowski_gram(pts);
    for (double r : {0.5, 1.0, 2.0}) {
        SymMatrix powered(L.size());
        for (int i = 0; i < L.size(); ++i)
            for (int j = i; j < L.size(); ++j) powered.set(i, j, std::pow(L(i, j), r));
        CHECK(kf::check_log_conditional(powered).verdict);
    }
}

TEST_CASE("entrywise square of the pairing gram through the pivot test") {
    // Powers above one need not stay hyperbolic in general; record the
    // outcome on a sample without asserting a direction.
    auto rng = kftest::make_rng(111);
    const auto pts = kftest::random_hyperboloid_points(8, 2, rng);
    const SymMatrix L = minkowski_gram(pts);
    SymMatrix squared(L.size());
    for (int i = 0; i < L.size(); ++i)
        for (int j = i; j < L.size(); ++j) squared.set(i, j, L(i, j) * L(i, j));
    // diagonal stays 1, so only the pivot matrices decide
    kf::ClassReport outcome;
    CHECK_NOTHROW(outcome = kf::check_hyperbolic(squared));
    INFO("entrywise square pivot-test verdict: ", outcome.verdict);
    CHECK((outcome.verdict == true || outcome.verdict == false));
}

TEST_CASE("hilbertian and geodesic metrics are linked by log cosh") {
    auto rng = kftest::make_rng(113);
    for (int i = 0; i < 40; ++i) {
        const auto pts = kftest::random_hyperboloid_points(2, 3, rng);
        const double s = kf::minkowski_form(pts[0], pts[1]);
        const double d_geo = kf::hyperbolic_distance(pts[0], pts[1]);
        const double d_hil = std::sqrt(std::log(s));
        CHECK(std::abs(d_hil - std::sqrt(std::log(std::cosh(d_geo)))) <= 1e-10);
    }
}

TEST_CASE("reciprocal kernels of log-conditional descriptors") {
    const Point z = Point::hyperboloid({0.0}, 1.0);
    const Point w = Point::hyperboloid({std::sinh(1.0)}, std::cosh(1.0));

    // constant one: a flat kernel
    const auto flat = kf::inverse_kernel(kf::LogCond::constant(1.0));
    CHECK(kf::eval(flat, z, w) == 1.0);
    CHECK_THROWS_AS(kf::LogCond::constant(0.5), std::invalid_argument);

    // the Lorentzian pairing inverts to the reciprocal power r = 1
    const auto inv = kf::inverse_kernel(kf::LogCond::minkowski());
    auto rng = kftest::make_rng(115);
    for (int i = 0; i < 20; ++i) {
        const auto pts = kftest::random_hyperboloid_points(2, 2, rng);
        CHECK(kf::eval(inv, pts[0], pts[1]) ==
              doctest::Approx(kf::eval(kf::sech_power_kernel(1.0), pts[0], pts[1]))
                  .epsilon(1e-14));
    }

    // a metrizable exponential descriptor gives a strictly PD gram
    const auto expo = kf::inverse_kernel(kf::LogCond::exp_cnd(kf::SiteCnd::sq_dist()));
    const auto pts = kftest::random_euclidean_points(10, 2, rng);
    CHECK(kf::gram(expo, pts, true).verdict->cls == kf::PsdClass::PD);
}
