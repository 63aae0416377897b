#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kernelforge/descriptors.hpp"
#include "kernelforge/kernel_spec.hpp"
#include "kernelforge/numerics.hpp"
#include "kernelforge/point.hpp"
#include "kernelforge/report.hpp"

namespace kf {

/// Verdict of the conditional-negative-definiteness test: the quadratic
/// form restricted to zero-sum weights is nonpositive iff the projected
/// matrix P G P (P = I - ones/n) has no positive eigenvalue beyond tol.
struct CndReport {
    bool is_cnd = false;
    double lambda_max_projected = 0.0;
    std::optional<std::vector<double>> witness_weights; // zero-sum, unit norm; present iff !is_cnd
    double tol_used = 0.0;
};

/// tol <= 0 selects the default 1e-9 * max(1, |gamma|_max).
CndReport check_cnd(const SymMatrix& gamma, double tol = -1.0);
CndReport check_cnd(const SiteCnd& gamma, const std::vector<Point>& points, double tol = -1.0);

/// 2 g(x,y) > g(x,x) + g(y,y) for every pair of distinct points.
ClassReport check_metrizable(const SymMatrix& gamma, double tol = -1.0);
/// Point-level variant; rejects duplicate points (the predicate speaks
/// about distinct arguments only).
ClassReport check_metrizable(const SiteCnd& gamma, const std::vector<Point>& points,
                             double tol = -1.0);

/// Kernel x,y -> exp(-t * gamma(x,y)); positive definite for every t > 0
/// exactly when gamma is conditionally negative definite.
KernelSpec schoenberg_transform(const SiteCnd& gamma, double t);

/// Entrywise exp(-t * gamma) of a matrix instance.
SymMatrix schoenberg_matrix(const SymMatrix& gamma, double t);

/// sqrt(gamma(x,y) - gamma(x,x)/2 - gamma(y,y)/2); radicands in
/// [-1e-12, 0] clamp to zero, anything lower is a metrizability violation.
double induced_distance(const SiteCnd& gamma, const Point& x, const Point& y);

/// Finite-sample Hilbert embedding gamma_ij = |h_i - h_j|^2 + f_i + f_j
/// with f_i = gamma_ii / 2 and h(base) = 0.
struct Embedding {
    int n = 0;
    int rank = 0;
    int base_index = 0;
    std::vector<double> coords; // row-major n x rank
    std::vector<double> f;      // length n

    double coord(int i, int k) const { return coords[static_cast<std::size_t>(i) * rank + k]; }
    /// |h_i - h_j|^2 + f_i + f_j.
    double reconstruct(int i, int j) const;
};

/// Factorizes the anchored inner-product matrix
///   G_ij = [gamma(i,base) + gamma(j,base) - gamma(i,j) - gamma(base,base)] / 2,
/// which is PSD exactly when gamma is CND. rank_tol (relative to the top
/// eigenvalue) decides which directions are kept.
Embedding embed(const SymMatrix& gamma, int base_index = 0, double rank_tol = 1e-10);

struct MonotonicityViolation {
    int order;
    double grid_point;
    double value;
};

struct MonotonicityReport {
    enum class Property { CompletelyMonotone, Bernstein };
    Property property;
    int order_checked = 0;
    std::vector<double> grid;
    std::vector<MonotonicityViolation> violations;
    double tol_used = 0.0;
    bool pass() const { return violations.empty(); }
};

/// Divided-difference sign probe: (-1)^k D^k f >= -tol on the grid for
/// k = 0..order. A necessary condition for complete monotonicity, not a
/// proof.
MonotonicityReport probe_completely_monotone(const std::function<double(double)>& f,
                                             const std::vector<double>& grid,
                                             int order,
                                             double tol_scale = 1e-7);

/// g >= 0 on the grid and the first divided differences of g pass the
/// completely-monotone probe (orders shifted by one).
MonotonicityReport probe_bernstein(const std::function<double(double)>& g,
                                   const std::vector<double>& grid,
                                   int order,
                                   double tol_scale = 1e-7);

/// Geometric grid lo, lo*ratio, ... capped at hi.
std::vector<double> geometric_grid(double lo, double hi, double ratio = 1.25);

} // namespace kf
