#include "kernelforge/cnd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kernelforge/errors.hpp"

namespace kf {

namespace {

double default_tol(const SymMatrix& m) { return 1e-9 * std::max(1.0, m.max_abs()); }

SymMatrix assemble(const SiteCnd& gamma, const std::vector<Point>& points) {
    const int n = static_cast<int>(points.size());
    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m.set(i, j, gamma(points[i], points[j]));
    return m;
}

void require_distinct(const std::vector<Point>& points) {
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points_equal(points[i], points[j]))
                throw std::invalid_argument("duplicate points at indices " +
                                            std::to_string(i) + " and " + std::to_string(j));
}

} // namespace

CndReport check_cnd(const SymMatrix& gamma, double tol) {
    const int n = gamma.size();
    if (n < 2) throw std::invalid_argument("check_cnd: needs at least two points");
    if (tol <= 0.0) tol = default_tol(gamma);

    // P G P with P = I - ones/n, i.e. double centering.
    std::vector<double> row_mean(n, 0.0);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += gamma(i, j);
        row_mean[i] = s / n;
        total += s;
    }
    const double grand = total / (static_cast<double>(n) * n);

    SymMatrix projected(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            projected.set(i, j, gamma(i, j) - row_mean[i] - row_mean[j] + grand);

    const Spectrum s = sym_eigen(projected, true);
    CndReport r;
    r.lambda_max_projected = s.eigenvalues.back();
    r.tol_used = tol;
    r.is_cnd = r.lambda_max_projected <= tol;
    if (!r.is_cnd) {
        std::vector<double> w = s.eigenvector(n - 1);
        double mean = 0.0;
        for (double v : w) mean += v;
        mean /= n;
        for (double& v : w) v -= mean;
        double norm = 0.0;
        for (double v : w) norm += v * v;
        norm = std::sqrt(norm);
        if (norm > 0.0)
            for (double& v : w) v /= norm;
        r.witness_weights = std::move(w);
    }
    return r;
}

CndReport check_cnd(const SiteCnd& gamma, const std::vector<Point>& points, double tol) {
    return check_cnd(assemble(gamma, points), tol);
}

ClassReport check_metrizable(const SymMatrix& gamma, double tol) {
    const int n = gamma.size();
    if (n < 2) throw std::invalid_argument("check_metrizable: needs at least two points");
    if (tol < 0.0) tol = 1e-10 * std::max(1.0, gamma.max_abs());

    ClassReport r;
    r.predicate = "metrizable";
    r.tol_used = tol;
    r.verdict = true;
    for (int i = 0; i < n && r.verdict; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double margin = 2.0 * gamma(i, j) - gamma(i, i) - gamma(j, j);
            if (!(margin > tol)) {
                r.verdict = false;
                r.witness_pair = {i, j};
                r.witness_value = margin;
                r.detail = "2g(i,j) - g(i,i) - g(j,j) = " + std::to_string(margin);
                break;
            }
        }
    }
    return r;
}

ClassReport check_metrizable(const SiteCnd& gamma, const std::vector<Point>& points,
                             double tol) {
    require_distinct(points);
    return check_metrizable(assemble(gamma, points), tol);
}

KernelSpec schoenberg_transform(const SiteCnd& gamma, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("schoenberg_transform: t must be positive");
    return KernelSpec(KernelSpec::InverseLogCond{LogCond::exp_cnd(gamma.scaled(t))});
}

SymMatrix schoenberg_matrix(const SymMatrix& gamma, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("schoenberg_matrix: t must be positive");
    SymMatrix m(gamma.size());
    for (int i = 0; i < gamma.size(); ++i)
        for (int j = i; j < gamma.size(); ++j) m.set(i, j, std::exp(-t * gamma(i, j)));
    return m;
}

double induced_distance(const SiteCnd& gamma, const Point& x, const Point& y) {
    const double rad = gamma(x, y) - 0.5 * gamma(x, x) - 0.5 * gamma(y, y);
    if (rad < -1e-12)
        throw std::domain_error("induced_distance: negative radicand, kernel not metrizable here");
    return rad > 0.0 ? std::sqrt(rad) : 0.0;
}

double Embedding::reconstruct(int i, int j) const {
    double d2 = 0.0;
    for (int k = 0; k < rank; ++k) {
        const double d = coord(i, k) - coord(j, k);
        d2 += d * d;
    }
    return d2 + f[i] + f[j];
}

Embedding embed(const SymMatrix& gamma, int base_index, double rank_tol) {
    const int n = gamma.size();
    if (n < 1) throw std::invalid_argument("embed: empty input");
    if (base_index < 0 || base_index >= n)
        throw std::invalid_argument("embed: base index out of range");

    // Anchored inner products <h_i, h_j>.
    SymMatrix inner(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            inner.set(i, j, 0.5 * (gamma(i, base_index) + gamma(j, base_index) -
                                   gamma(i, j) - gamma(base_index, base_index)));

    const Spectrum s = sym_eigen(inner, true);
    const double lmax = s.eigenvalues.back();
    const double lmin = s.eigenvalues.front();
    const double psd_tol = 1e-9 * static_cast<double>(n) * std::max(1.0, std::abs(lmax));
    if (lmin < -psd_tol)
        throw precondition_error(
            "embed: input is not conditionally negative definite (centered eigenvalue " +
            std::to_string(lmin) + ")");

    Embedding e;
    e.n = n;
    e.base_index = base_index;
    e.f.resize(n);
    for (int i = 0; i < n; ++i) e.f[i] = 0.5 * gamma(i, i);

    const double cut = rank_tol * std::max(lmax, 0.0);
    std::vector<int> kept; // descending eigenvalue order
    for (int k = n - 1; k >= 0; --k)
        if (s.eigenvalues[k] > cut && s.eigenvalues[k] > 0.0) kept.push_back(k);

    e.rank = static_cast<int>(kept.size());
    e.coords.assign(static_cast<std::size_t>(n) * e.rank, 0.0);
    for (int c = 0; c < e.rank; ++c) {
        const int k = kept[c];
        const double scale = std::sqrt(s.eigenvalues[k]);
        for (int i = 0; i < n; ++i)
            e.coords[static_cast<std::size_t>(i) * e.rank + c] = scale * s.vec(i, k);
    }
    return e;
}

namespace {

MonotonicityReport run_probe(MonotonicityReport::Property property,
                             const std::function<double(double)>& f,
                             const std::vector<double>& grid, int order,
                             double tol_scale) {
    if (order < 0 || order > 8)
        throw std::invalid_argument("monotonicity probe: order must lie in [0, 8]");
    if (static_cast<int>(grid.size()) < order + 1)
        throw std::invalid_argument("monotonicity probe: grid too short for requested order");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i + 1] > grid[i]))
            throw std::invalid_argument("monotonicity probe: grid must be strictly ascending");

    std::vector<double> values(grid.size());
    double max_abs = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        values[i] = f(grid[i]);
        if (!std::isfinite(values[i]))
            throw std::runtime_error("monotonicity probe: non-finite evaluation at t = " +
                                     std::to_string(grid[i]));
        max_abs = std::max(max_abs, std::abs(values[i]));
    }

    MonotonicityReport r;
    r.property = property;
    r.order_checked = order;
    r.grid = grid;
    r.tol_used = tol_scale * std::max(max_abs, 1e-30);

    const bool bernstein = property == MonotonicityReport::Property::Bernstein;

    // Order 0 is plain nonnegativity for both properties.
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] < -r.tol_used) r.violations.push_back({0, grid[i], values[i]});

    std::vector<double> dd = values;
    for (int k = 1; k <= order; ++k) {
        std::vector<double> next(dd.size() - 1);
        for (std::size_t i = 0; i + 1 < dd.size(); ++i)
            next[i] = (dd[i + 1] - dd[i]) / (grid[i + k] - grid[i]);
        dd = std::move(next);

        // CM alternates starting negative at order 1; for a Bernstein
        // candidate the dd of order k stands in for the dd of order k-1
        // of g', so the signs shift by one.
        const double sign = ((bernstein ? k + 1 : k) % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < dd.size(); ++i)
            if (sign * dd[i] < -r.tol_used)
                r.violations.push_back({k, grid[i], dd[i]});
    }
    return r;
}

} // namespace

MonotonicityReport probe_completely_monotone(const std::function<double(double)>& f,
                                             const std::vector<double>& grid,
                                             int order, double tol_scale) {
    return run_probe(MonotonicityReport::Property::CompletelyMonotone, f, grid, order,
                     tol_scale);
}

MonotonicityReport probe_bernstein(const std::function<double(double)>& g,
                                   const std::vector<double>& grid,
                                   int order, double tol_scale) {
    return run_probe(MonotonicityReport::Property::Bernstein, g, grid, order, tol_scale);
}

std::vector<double> geometric_grid(double lo, double hi, double ratio) {
    if (!(lo > 0.0) || !(hi > lo) || !(ratio > 1.0))
        throw std::invalid_argument("geometric_grid: need 0 < lo < hi and ratio > 1");
    std::vector<double> g;
    for (double v = lo; v <= hi * (1.0 + 1e-12); v *= ratio) g.push_back(v);
    return g;
}

} // namespace kf
