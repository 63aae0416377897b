#pragma once

#include <vector>

#include "kernelforge/cnd.hpp"
#include "kernelforge/kernel_spec.hpp"
#include "kernelforge/point.hpp"
#include "kernelforge/report.hpp"

namespace kf {

/// Chart point x in R^m lifted onto the hyperboloid sheet, t = sqrt(1+|x|^2).
Point lift(const std::vector<double>& x);

/// Inverse of lift: the ambient spatial part.
std::vector<double> project(const Point& z);

/// Lorentzian pairing t_z t_w - <x_z, x_w>; >= 1 on the sheet, and exactly
/// 1 on the diagonal.
double minkowski_form(const Point& z, const Point& w);

/// Geodesic distance arccosh([z,w]). Values of the form in [1 - 1e-9, 1]
/// clamp to 1; anything below is an invariant violation. A series branch
/// near 1 avoids the cancellation in log(s + sqrt(s^2 - 1)).
double hyperbolic_distance(const Point& z, const Point& w);

/// [z,w]^{-r} = sech(d(z,w))^r.
KernelSpec sech_power_kernel(double r);

struct IsotropicAtoms {
    std::vector<std::pair<double, double>> atoms; // (weight, exponent)
    /// Some atom has positive weight and positive exponent; constant-only
    /// mixtures are positive definite but not strictly so.
    bool strict() const;
};

/// sum_i w_i [z,w]^{-r_i}.
KernelSpec isotropic_kernel(const IsotropicAtoms& atoms);

/// beta has unit diagonal and, for every pivot z in the sample, the matrix
/// M_xy = beta(x,z) beta(y,z) - beta(x,y) is positive semidefinite. All
/// pivots are checked (they are equivalent in exact arithmetic).
ClassReport check_hyperbolic(const SymMatrix& beta, double tol = 1e-8);

struct LogConditionalReport {
    bool verdict = false;       // log L is conditionally negative definite
    CndReport cnd;
    ClassReport metrizable;     // sub-verdict on log L
    double tol_used = 0.0;
};

/// Entries must be >= 1 (within tol below); verdict is check_cnd(log L).
LogConditionalReport check_log_conditional(const SymMatrix& L, double tol = -1.0);

/// x,y -> 1 / L(x,y) = e^{-log L(x,y)}.
KernelSpec inverse_kernel(const LogCond& log_kernel);

} // namespace kf
