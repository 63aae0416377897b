#pragma once

namespace kf {

/// Gamma function for x > 0 via a 15-term Lanczos rational approximation
/// (reflection below 0.5). Throws std::domain_error for x <= 0 and
/// std::range_error once the result overflows (x > ~171.6).
double gamma_fn(double x);

/// Modified Bessel function of the second kind K_nu(z) for z > 0 and
/// 0 <= nu <= 30. Half-integer orders use the closed-form recurrence,
/// small z uses power series, everything else tanh-sinh quadrature of
/// the cosh integral representation.
double bessel_k(double nu, double z);

namespace detail {

/// Gamma on the full real line minus the poles; used by series expansions
/// that need reciprocal gamma at negative non-integer arguments.
double gamma_any(double x);

/// sin(pi * x) computed from the reduced argument, accurate near integers.
double sin_pi(double x);

// Individual K_nu evaluation paths, exposed so tests can cross-check
// one against another on overlapping domains.
double bessel_k_half_integer(double nu, double z);
double bessel_k_series_integer(int n, double z);
double bessel_k_series_fractional(double nu, double z);
double bessel_k_integral(double nu, double z);

} // namespace detail

} // namespace kf
