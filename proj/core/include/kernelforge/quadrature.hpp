#pragma once

#include <functional>

#include "kernelforge/errors.hpp"

namespace kf {

/// Tanh-sinh rule on a finite interval [a, b] with level doubling.
/// Converges when successive refinements agree to rel_tol relative
/// (with a tiny absolute floor so an identically-zero integrand passes).
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

/// Integral over (0, inf) via the substitution t = e^s followed by a
/// double-exponential (sinh) stretch of the real line, refined by node
/// doubling and capped at 2^20 evaluations. Throws quadrature_error with
/// the partial value if the cap is reached before convergence.
double quad_semi_infinite(const std::function<double(double)>& f, double accuracy);

} // namespace kf
