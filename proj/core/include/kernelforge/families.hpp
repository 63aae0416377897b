#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kernelforge/descriptors.hpp"
#include "kernelforge/kernel_spec.hpp"
#include "kernelforge/numerics.hpp"
#include "kernelforge/point.hpp"

namespace kf {

struct MaternParams {
    double alpha; // inverse scale, > 0
    double nu;    // smoothness, > 0
};

/// 2^{1-nu} (alpha r)^nu K_nu(alpha r) / Gamma(nu), with the limit value 1
/// at r = 0 taken directly.
double matern(double r, const MaternParams& params);

/// The same value through the scale-mixture integral
///   int_0^inf e^{-r^2 t} (alpha^2/4)^nu t^{-1-nu} e^{-alpha^2/(4t)} / Gamma(nu) dt,
/// evaluated by semi-infinite quadrature. Independent of the closed form.
double matern_oracle(double r, const MaternParams& params, double accuracy = 1e-9);

/// e^{-sigma |x-y|^2} on Euclidean points of any dimension.
KernelSpec gaussian(double sigma);

/// sum_i w_i e^{-r_i |x-y|^2}, w_i >= 0, not all zero. Atoms with r = 0
/// contribute constants; the leaf's strict flag records whether any decay
/// atom is present.
KernelSpec radial_cm_mixture(const std::vector<std::pair<double, double>>& atoms);

struct GneitingClassicSpec {
    ScalarFn g;   // Bernstein candidate, positive
    ScalarFn psi; // completely monotone candidate
    int m;        // spatial dimension
};

struct GneitingGeneralSpec {
    KernelSpec site_kernel; // A(u,v)
    SiteCnd gamma;          // positive CND kernel on sites
    int m;
};

struct GneitingConstruction {
    KernelSpec spec;
    std::vector<std::string> warnings; // failed necessary-condition probes
};

/// Classic space-time kernel g(|u-v|^2)^{-m/2} psi(|x-y|^2 / g(|u-v|^2)).
/// Construction probes g (Bernstein) and psi (completely monotone) on a
/// default geometric grid; failures are warnings, not errors.
GneitingConstruction gneiting(const GneitingClassicSpec& spec);

/// Generalized form A(u,v) e^{-|x-y|^2 / gamma(u,v)}.
GneitingConstruction gneiting(const GneitingGeneralSpec& spec);

/// PSD probe of C(u,v) = A(u,v) gamma(u,v)^{m/2} on a site sample, the
/// standing hypothesis of the generalized form.
PsdVerdict gneiting_general_precondition(const GneitingGeneralSpec& spec,
                                         const std::vector<Point>& sites);

struct MaternMatrixClassification {
    bool spd = false;
    std::optional<std::pair<int, int>> duplicate_witness; // offending channel pair
    std::optional<int> nonpositive_diagonal;              // offending channel
    /// For a duplicate pair: the 2x2 overlap matrix of the offending
    /// channels' scale-mixture densities. Singular exactly when the
    /// parameters coincide, independently of the coefficient matrix.
    std::optional<SymMatrix> witness_matrix;
    std::string condition;
};

MatrixKernel matern_product_matrix(SymMatrix a, SiteCnd gamma,
                                   std::vector<double> alphas,
                                   std::vector<double> nus, int m);
/// Strictness requires positive channel diagonals and pairwise-distinct
/// (alpha_i, nu_i); duplicates are reported with the offending pair.
MaternMatrixClassification classify_matern_product(const MatrixKernel& k);
/// PSD probe of the associated normalization matrix kernel C on a site
/// sample (a standing hypothesis of the family, checked rather than
/// assumed).
PsdVerdict matern_product_precondition(const MatrixKernel& k,
                                       const std::vector<Point>& sites);

MatrixKernel matern_hilbert_matrix(SymMatrix a, SiteCnd gamma, std::vector<double> nus);
/// Strictness requires positive channel diagonals and distinct nu_i.
MaternMatrixClassification classify_matern_hilbert(const MatrixKernel& k);
PsdVerdict matern_hilbert_precondition(const MatrixKernel& k,
                                       const std::vector<Point>& sites);

MatrixKernel gamma_power_matrix(SiteCnd gamma, std::vector<double> nus);

struct GammaPowerClassification {
    bool spd = false; // distinct exponents
    std::optional<std::pair<int, int>> duplicate_witness;
    double min_site_diagonal = 0.0; // inf gamma(u,u) over the probed sample
    bool ispd_grade = false;        // spd and min_site_diagonal > 0
};

GammaPowerClassification classify_gamma_power(const MatrixKernel& k,
                                              const std::vector<Point>& sites);

/// Channel-indexed Gaussian instance [a_ij e^{-|x-y|^2 / gamma_ij}] with
/// the two standing hypotheses: C = [a_ij gamma_ij^{m/2}] is PSD and the
/// gamma matrix is conditionally negative definite (entries positive).
struct MatrixGaussianInstance {
    SymMatrix a;
    SymMatrix gamma;
    int m;
};

struct MatrixGaussianReport {
    bool spd = false;          // a is PD
    bool c0_universal = false; // every class submatrix of C is PD
    std::vector<std::vector<int>> classes; // partition of 0..l-1
    std::optional<std::vector<int>> failing_class;
    double tol_used = 0.0;
};

/// Verifies the instance hypotheses (precondition_error on violation),
/// partitions channels by the relation |2 g_ij - g_ii - g_jj| <= tol
/// (inconsistent_instance_error if the relation is not transitive at
/// tol), and evaluates both classifier conditions. tol <= 0 selects
/// 1e-9 * max(1, |gamma|_max).
MatrixGaussianReport classify_matrix_gaussian(const MatrixGaussianInstance& inst,
                                              double tol = -1.0);

struct RankProbeReport {
    double smallest_sv = 0.0;
    double largest_sv = 0.0;
    int numerical_rank = 0;
};

/// Singular values of the evaluation matrix [e^{-sigma_s |c_k - g_j|^2}]
/// (one row per (sigma, center), one column per grid point). Full row
/// rank is the finite echo of the span independence of distinct widths.
RankProbeReport gaussian_span_rank_probe(const std::vector<double>& sigmas,
                                         const std::vector<Point>& centers,
                                         const std::vector<Point>& grid);

} // namespace kf
