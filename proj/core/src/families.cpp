#include "kernelforge/families.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "kernelforge/cnd.hpp"
#include "kernelforge/errors.hpp"
#include "kernelforge/quadrature.hpp"
#include "kernelforge/special_functions.hpp"

namespace kf {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

} // namespace

double matern(double r, const MaternParams& params) {
    require_positive(params.alpha, "matern: alpha");
    require_positive(params.nu, "matern: nu");
    if (r < 0.0) throw std::invalid_argument("matern: distance must be nonnegative");
    if (r == 0.0) return 1.0; // limit of the Bessel expression
    const double x = params.alpha * r;
    const double v =
        std::pow(2.0, 1.0 - params.nu) * std::pow(x, params.nu) * bessel_k(params.nu, x) /
        gamma_fn(params.nu);
    // clip rounding excursions above the exact value at r -> 0
    return std::min(v, 1.0);
}

double matern_oracle(double r, const MaternParams& params, double accuracy) {
    require_positive(params.alpha, "matern_oracle: alpha");
    require_positive(params.nu, "matern_oracle: nu");
    if (r < 0.0) throw std::invalid_argument("matern_oracle: distance must be nonnegative");

    const double nu = params.nu;
    const double a24 = 0.25 * params.alpha * params.alpha;
    const double r2 = r * r;
    const double inv_gamma = 1.0 / gamma_fn(nu);
    const double log_a24 = std::log(a24);

    return quad_semi_infinite(
        [=](double t) {
            const double e = nu * log_a24 - (1.0 + nu) * std::log(t) - a24 / t - r2 * t;
            return e < -745.0 ? 0.0 : inv_gamma * std::exp(e);
        },
        accuracy);
}

KernelSpec gaussian(double sigma) {
    require_positive(sigma, "gaussian: sigma");
    return KernelSpec(KernelSpec::Gaussian{sigma});
}

KernelSpec radial_cm_mixture(const std::vector<std::pair<double, double>>& atoms) {
    if (atoms.empty()) throw std::invalid_argument("radial_cm_mixture: no atoms");
    bool any = false;
    bool strict = false;
    for (const auto& [w, rate] : atoms) {
        if (w < 0.0 || rate < 0.0)
            throw std::invalid_argument("radial_cm_mixture: weights and rates must be nonnegative");
        if (w > 0.0) any = true;
        if (w > 0.0 && rate > 0.0) strict = true;
    }
    if (!any) throw std::invalid_argument("radial_cm_mixture: all weights are zero");
    return KernelSpec(KernelSpec::CmMixture{atoms, strict});
}

GneitingConstruction gneiting(const GneitingClassicSpec& spec) {
    if (spec.m < 1) throw std::invalid_argument("gneiting: spatial dimension must be >= 1");

    GneitingConstruction out{
        KernelSpec(KernelSpec::GneitingClassic{spec.g, spec.psi, spec.m}), {}};

    const auto grid = geometric_grid(0.1, 10.0);
    for (double t : grid)
        if (!(spec.g(t) > 0.0)) {
            out.warnings.push_back("g is not positive at t = " + std::to_string(t));
            break;
        }
    if (!probe_bernstein([&](double t) { return spec.g(t); }, grid, 4).pass())
        out.warnings.push_back("g failed the Bernstein probe");
    const auto cm = probe_completely_monotone([&](double t) { return spec.psi(t); }, grid, 6);
    if (!cm.pass()) out.warnings.push_back("psi failed the complete-monotonicity probe");
    if (std::abs(spec.psi(grid.front()) - spec.psi(grid.back())) < 1e-14)
        out.warnings.push_back("psi looks constant; the kernel will not be strict");
    return out;
}

GneitingConstruction gneiting(const GneitingGeneralSpec& spec) {
    if (spec.m < 1) throw std::invalid_argument("gneiting: spatial dimension must be >= 1");
    return GneitingConstruction{
        KernelSpec(KernelSpec::GneitingGeneral{
            std::make_shared<const KernelSpec>(spec.site_kernel), spec.gamma, spec.m}),
        {}};
}

PsdVerdict gneiting_general_precondition(const GneitingGeneralSpec& spec,
                                         const std::vector<Point>& sites) {
    const int n = static_cast<int>(sites.size());
    if (n == 0) throw std::invalid_argument("gneiting_general_precondition: empty site sample");
    SymMatrix c(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double g = spec.gamma(sites[i], sites[j]);
            if (!(g > 0.0))
                throw std::invalid_argument("gneiting: site kernel must be positive");
            c.set(i, j, eval(spec.site_kernel, sites[i], sites[j]) * std::pow(g, 0.5 * spec.m));
        }
    return classify_psd(c);
}

// ---------------------------------------------------------------------------
// matrix-valued families
// ---------------------------------------------------------------------------

namespace {

void validate_channels(const SymMatrix& a, const std::vector<double>& nus,
                       const char* what) {
    if (a.size() < 1) throw std::invalid_argument(std::string(what) + ": needs a channel");
    if (static_cast<int>(nus.size()) != a.size())
        throw std::invalid_argument(std::string(what) + ": channel count mismatch");
    for (double nu : nus) require_positive(nu, what);
}

/// Gram of an l x l site matrix-kernel entry function on a site sample,
/// flattened channel-fastest.
template <typename EntryFn>
SymMatrix site_matrix_gram(int l, const std::vector<Point>& sites, EntryFn&& entry) {
    const int ns = static_cast<int>(sites.size());
    if (ns == 0) throw std::invalid_argument("matrix kernel probe: empty site sample");
    SymMatrix m(ns * l);
    for (int s = 0; s < ns; ++s)
        for (int t = s; t < ns; ++t)
            for (int i = 0; i < l; ++i)
                for (int j = 0; j < l; ++j) {
                    const int row = s * l + i;
                    const int col = t * l + j;
                    if (col < row) continue;
                    m.set(row, col, entry(i, j, sites[s], sites[t]));
                }
    return m;
}

std::optional<std::pair<int, int>> find_duplicate_pairs(const std::vector<double>& alphas,
                                                        const std::vector<double>& nus) {
    for (std::size_t i = 0; i < nus.size(); ++i)
        for (std::size_t j = i + 1; j < nus.size(); ++j) {
            const bool same_alpha = alphas.empty() || alphas[i] == alphas[j];
            if (same_alpha && nus[i] == nus[j])
                return std::make_pair(static_cast<int>(i), static_cast<int>(j));
        }
    return std::nullopt;
}

} // namespace

MatrixKernel matern_product_matrix(SymMatrix a, SiteCnd gamma,
                                   std::vector<double> alphas,
                                   std::vector<double> nus, int m) {
    validate_channels(a, nus, "matern_product_matrix");
    if (alphas.size() != nus.size())
        throw std::invalid_argument("matern_product_matrix: channel count mismatch");
    for (double al : alphas) require_positive(al, "matern_product_matrix: alpha");
    if (m < 1) throw std::invalid_argument("matern_product_matrix: spatial dimension must be >= 1");
    return MatrixKernel(MatrixKernel::MaternProduct{std::move(a), std::move(gamma),
                                                    std::move(alphas), std::move(nus), m});
}

MaternMatrixClassification classify_matern_product(const MatrixKernel& k) {
    const auto& mk = std::get<MatrixKernel::MaternProduct>(k.node());
    MaternMatrixClassification c;
    c.condition = "positive channel diagonals and pairwise-distinct (alpha, nu)";
    for (int i = 0; i < mk.a.size(); ++i)
        if (!(mk.a(i, i) > 0.0)) {
            c.nonpositive_diagonal = i;
            return c;
        }
    if (auto dup = find_duplicate_pairs(mk.alphas, mk.nus)) {
        c.duplicate_witness = dup;
        // overlap of the two scale-mixture densities, up to shared factors
        const int idx[2] = {dup->first, dup->second};
        SymMatrix w(2);
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j) {
                const double p = mk.nus[idx[i]] + mk.nus[idx[j]];
                const double qi = std::pow(2.0, -mk.nus[idx[i]]) *
                                  std::sqrt(gamma_fn(2.0 * mk.nus[idx[i]])) /
                                  std::pow(mk.alphas[idx[i]], mk.nus[idx[i]]);
                const double qj = std::pow(2.0, -mk.nus[idx[j]]) *
                                  std::sqrt(gamma_fn(2.0 * mk.nus[idx[j]])) /
                                  std::pow(mk.alphas[idx[j]], mk.nus[idx[j]]);
                w.set(i, j, qi * qj *
                                std::pow(mk.alphas[idx[i]] + mk.alphas[idx[j]], p) /
                                gamma_fn(p));
            }
        c.witness_matrix = std::move(w);
        return c;
    }
    c.spd = true;
    return c;
}

PsdVerdict matern_product_precondition(const MatrixKernel& k,
                                       const std::vector<Point>& sites) {
    const auto& mk = std::get<MatrixKernel::MaternProduct>(k.node());
    const int l = mk.a.size();
    std::vector<double> norm(l);
    for (int i = 0; i < l; ++i)
        norm[i] = std::pow(2.0, -mk.nus[i]) * std::sqrt(gamma_fn(2.0 * mk.nus[i])) /
                  std::pow(mk.alphas[i], mk.nus[i]);
    return classify_psd(site_matrix_gram(l, sites, [&](int i, int j, const Point& u, const Point& v) {
        const double g = mk.gamma(u, v);
        if (!(g > 0.0)) throw std::invalid_argument("matern matrix: site kernel must be positive");
        const double p = mk.nus[i] + mk.nus[j];
        return mk.a(i, j) * std::pow(g, 0.5 * mk.m) * norm[i] * norm[j] *
               std::pow(mk.alphas[i] + mk.alphas[j], p) / gamma_fn(p);
    }));
}

MatrixKernel matern_hilbert_matrix(SymMatrix a, SiteCnd gamma, std::vector<double> nus) {
    validate_channels(a, nus, "matern_hilbert_matrix");
    return MatrixKernel(MatrixKernel::MaternHilbert{std::move(a), std::move(gamma), std::move(nus)});
}

MaternMatrixClassification classify_matern_hilbert(const MatrixKernel& k) {
    const auto& mk = std::get<MatrixKernel::MaternHilbert>(k.node());
    MaternMatrixClassification c;
    c.condition = "positive channel diagonals and distinct nu";
    for (int i = 0; i < mk.a.size(); ++i)
        if (!(mk.a(i, i) > 0.0)) {
            c.nonpositive_diagonal = i;
            return c;
        }
    if (auto dup = find_duplicate_pairs({}, mk.nus)) {
        c.duplicate_witness = dup;
        // unit-scale overlap Gamma(nu_i + nu_j) of the offending channels
        const int idx[2] = {dup->first, dup->second};
        SymMatrix w(2);
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j)
                w.set(i, j, gamma_fn(mk.nus[idx[i]] + mk.nus[idx[j]]));
        c.witness_matrix = std::move(w);
        return c;
    }
    c.spd = true;
    return c;
}

PsdVerdict matern_hilbert_precondition(const MatrixKernel& k,
                                       const std::vector<Point>& sites) {
    const auto& mk = std::get<MatrixKernel::MaternHilbert>(k.node());
    return classify_psd(site_matrix_gram(
        mk.a.size(), sites, [&](int i, int j, const Point& u, const Point& v) {
            const double g = mk.gamma(u, v);
            if (!(g > 0.0))
                throw std::invalid_argument("matern matrix: site kernel must be positive");
            const double p = mk.nus[i] + mk.nus[j];
            return mk.a(i, j) * std::pow(g, p) / gamma_fn(p);
        }));
}

MatrixKernel gamma_power_matrix(SiteCnd gamma, std::vector<double> nus) {
    if (nus.empty()) throw std::invalid_argument("gamma_power_matrix: needs a channel");
    for (double nu : nus) require_positive(nu, "gamma_power_matrix: nu");
    return MatrixKernel(MatrixKernel::GammaPower{std::move(gamma), std::move(nus)});
}

GammaPowerClassification classify_gamma_power(const MatrixKernel& k,
                                              const std::vector<Point>& sites) {
    const auto& mk = std::get<MatrixKernel::GammaPower>(k.node());
    if (sites.empty()) throw std::invalid_argument("classify_gamma_power: empty site sample");

    GammaPowerClassification c;
    c.duplicate_witness = find_duplicate_pairs({}, mk.nus);
    c.spd = !c.duplicate_witness.has_value();
    c.min_site_diagonal = std::numeric_limits<double>::infinity();
    for (const auto& u : sites) {
        const double g = mk.gamma(u, u);
        if (!(g > 0.0)) throw std::invalid_argument("gamma power kernel: requires gamma > 0");
        c.min_site_diagonal = std::min(c.min_site_diagonal, g);
    }
    c.ispd_grade = c.spd && c.min_site_diagonal > 0.0;
    return c;
}

MatrixGaussianReport classify_matrix_gaussian(const MatrixGaussianInstance& inst,
                                              double tol) {
    const int l = inst.a.size();
    if (l < 1) throw std::invalid_argument("classify_matrix_gaussian: empty instance");
    if (inst.gamma.size() != l)
        throw std::invalid_argument("classify_matrix_gaussian: a and gamma sizes differ");
    if (inst.m < 1) throw std::invalid_argument("classify_matrix_gaussian: m must be >= 1");
    for (int i = 0; i < l; ++i)
        for (int j = i; j < l; ++j)
            if (!(inst.gamma(i, j) > 0.0))
                throw std::invalid_argument("classify_matrix_gaussian: gamma entries must be positive");
    if (tol <= 0.0) tol = 1e-9 * std::max(1.0, inst.gamma.max_abs());

    // standing hypotheses
    SymMatrix c(l);
    for (int i = 0; i < l; ++i)
        for (int j = i; j < l; ++j)
            c.set(i, j, inst.a(i, j) * std::pow(inst.gamma(i, j), 0.5 * inst.m));
    const PsdVerdict c_verdict = classify_psd(c);
    if (c_verdict.cls == PsdClass::INDEFINITE)
        throw precondition_error(
            "classify_matrix_gaussian: C = [a_ij gamma_ij^{m/2}] is not positive semidefinite"
            " (eigenvalue " + std::to_string(c_verdict.lambda_min) + ")");
    if (l >= 2) {
        const CndReport g_verdict = check_cnd(inst.gamma);
        if (!g_verdict.is_cnd)
            throw precondition_error(
                "classify_matrix_gaussian: gamma is not conditionally negative definite"
                " (projected eigenvalue " + std::to_string(g_verdict.lambda_max_projected) + ")");
    }

    MatrixGaussianReport out;
    out.tol_used = tol;
    out.spd = classify_psd(inst.a).cls == PsdClass::PD;

    // union-find over the degeneracy relation 2 g_ij = g_ii + g_jj
    auto related = [&](int i, int j) {
        return std::abs(2.0 * inst.gamma(i, j) - inst.gamma(i, i) - inst.gamma(j, j)) <= tol;
    };
    std::vector<int> parent(l);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (int i = 0; i < l; ++i)
        for (int j = i + 1; j < l; ++j)
            if (related(i, j)) parent[find(i)] = find(j);

    std::vector<std::vector<int>> classes;
    std::vector<int> root_to_class(l, -1);
    for (int i = 0; i < l; ++i) {
        const int r = find(i);
        if (root_to_class[r] < 0) {
            root_to_class[r] = static_cast<int>(classes.size());
            classes.emplace_back();
        }
        classes[root_to_class[r]].push_back(i);
    }
    // the relation must actually be an equivalence at this tolerance
    for (int i = 0; i < l; ++i)
        for (int j = i + 1; j < l; ++j) {
            const bool same = find(i) == find(j);
            if (same != related(i, j))
                throw inconsistent_instance_error(
                    "classify_matrix_gaussian: degeneracy relation is not transitive at "
                    "tolerance " + std::to_string(tol));
        }
    out.classes = std::move(classes);

    out.c0_universal = true;
    for (const auto& cls : out.classes) {
        const int k = static_cast<int>(cls.size());
        SymMatrix sub(k);
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) sub.set(i, j, c(cls[i], cls[j]));
        if (classify_psd(sub).cls != PsdClass::PD) {
            out.c0_universal = false;
            out.failing_class = cls;
            break;
        }
    }
    return out;
}

RankProbeReport gaussian_span_rank_probe(const std::vector<double>& sigmas,
                                         const std::vector<Point>& centers,
                                         const std::vector<Point>& grid) {
    const int rows = static_cast<int>(sigmas.size() * centers.size());
    const int cols = static_cast<int>(grid.size());
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("gaussian_span_rank_probe: empty input");

    std::vector<double> e(static_cast<std::size_t>(rows) * cols);
    int r = 0;
    for (double sigma : sigmas)
        for (const auto& c : centers) {
            for (int j = 0; j < cols; ++j)
                e[static_cast<std::size_t>(r) * cols + j] = std::exp(
                    -sigma * squared_distance(c.as_euclidean().coords,
                                              grid[j].as_euclidean().coords));
            ++r;
        }

    SymMatrix g(rows);
    for (int i = 0; i < rows; ++i)
        for (int j = i; j < rows; ++j) {
            double s = 0.0;
            for (int k = 0; k < cols; ++k)
                s += e[static_cast<std::size_t>(i) * cols + k] *
                     e[static_cast<std::size_t>(j) * cols + k];
            g.set(i, j, s);
        }

    const Spectrum spec = sym_eigen(g);
    RankProbeReport out;
    out.largest_sv = std::sqrt(std::max(spec.eigenvalues.back(), 0.0));
    out.smallest_sv = std::sqrt(std::max(spec.eigenvalues.front(), 0.0));
    for (double l : spec.eigenvalues)
        if (std::sqrt(std::max(l, 0.0)) > 1e-8 * out.largest_sv) ++out.numerical_rank;
    return out;
}

} // namespace kf
