#include "kernelforge/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace kf {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

// Largest |u| for which exp((pi/2) sinh u) stays inside double range.
constexpr double kExpSinhCutoff = 6.7;

} // namespace

double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    if (!(b > a)) throw std::invalid_argument("tanh_sinh: requires b > a");
    const double half = 0.5 * (b - a);
    const double umax = 4.0; // weights are below 1e-30 beyond this

    // Abscissae are taken as offsets from the nearer endpoint:
    // 1 -+ tanh(s) = 2 e^{-2|s|} / (1 + e^{-2|s|}), which stays accurate
    // where the naive midpoint form would collapse onto the endpoint.
    auto eval = [&](double u) -> double {
        const double s = kHalfPi * std::sinh(u);
        const double ch = std::cosh(s);
        const double w = kHalfPi * std::cosh(u) / (ch * ch);
        if (w == 0.0 || !std::isfinite(w)) return 0.0;
        const double q = std::exp(-2.0 * std::abs(s));
        const double offset = half * 2.0 * q / (1.0 + q);
        if (offset == 0.0) return 0.0;
        const double x = (s >= 0.0) ? b - offset : a + offset;
        if (x <= a || x >= b) return 0.0;
        return w * f(x);
    };

    double h = 1.0;
    double sum = eval(0.0);
    for (double u = h; u <= umax; u += h) sum += eval(u) + eval(-u);
    double integral = sum * h * half;

    const int max_levels = 12;
    for (int level = 1; level <= max_levels; ++level) {
        h *= 0.5;
        double add = 0.0;
        for (double u = h; u <= umax; u += 2.0 * h) add += eval(u) + eval(-u);
        sum += add;
        const double refined = sum * h * half;
        const double err = std::abs(refined - integral);
        integral = refined;
        if (level >= 3 && err <= rel_tol * std::max(std::abs(integral), 1e-300))
            return integral;
    }
    throw quadrature_error("tanh_sinh: refinement cap reached", integral);
}

double quad_semi_infinite(const std::function<double(double)>& f, double accuracy) {
    if (!(accuracy > 0.0))
        throw std::invalid_argument("quad_semi_infinite: accuracy must be positive");

    // t = exp((pi/2) sinh u), dt = (pi/2) cosh u * t du
    auto eval = [&](double u) -> double {
        const double s = kHalfPi * std::sinh(u);
        const double t = std::exp(s);
        if (t == 0.0 || !std::isfinite(t)) return 0.0;
        const double w = kHalfPi * std::cosh(u) * t;
        const double v = f(t);
        if (!std::isfinite(v)) return 0.0; // underflowed tail evaluation
        return w * v;
    };

    double h = 1.0;
    double sum = eval(0.0);
    long evals = 1;
    for (double u = h; u <= kExpSinhCutoff; u += h) {
        sum += eval(u) + eval(-u);
        evals += 2;
    }
    double integral = sum * h;

    const long cap = 1L << 20;
    int level = 0;
    while (evals < cap) {
        ++level;
        h *= 0.5;
        double add = 0.0;
        for (double u = h; u <= kExpSinhCutoff; u += 2.0 * h) {
            add += eval(u) + eval(-u);
            evals += 2;
        }
        sum += add;
        const double refined = sum * h;
        const double err = std::abs(refined - integral);
        integral = refined;
        if (level >= 3 && err <= accuracy * std::max(std::abs(integral), 1e-300))
            return integral;
    }
    throw quadrature_error("quad_semi_infinite: node cap reached", integral);
}

} // namespace kf
