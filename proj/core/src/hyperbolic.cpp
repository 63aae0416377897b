#include "kernelforge/hyperbolic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kf {

Point lift(const std::vector<double>& x) {
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    return Point::hyperboloid(x, std::sqrt(1.0 + n2));
}

std::vector<double> project(const Point& z) { return z.as_hyperboloid().x; }

double minkowski_form(const Point& z, const Point& w) {
    const auto& a = z.as_hyperboloid();
    const auto& b = w.as_hyperboloid();
    if (a.x.size() != b.x.size())
        throw std::invalid_argument("minkowski_form: ambient dimension mismatch");
    double dot = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i) dot += a.x[i] * b.x[i];
    return a.t * b.t - dot;
}

double hyperbolic_distance(const Point& z, const Point& w) {
    const double s = minkowski_form(z, w);
    const double tol = 1e-9;
    if (s < 1.0 - tol)
        throw std::domain_error("hyperbolic_distance: Lorentzian pairing below 1 (" +
                                std::to_string(s) + ")");
    if (s <= 1.0) return 0.0;
    const double e = s - 1.0;
    if (e <= 1e-8) {
        // arccosh(1+e) = sqrt(2e) (1 - e/12 + 3e^2/160 - ...)
        return std::sqrt(2.0 * e) * (1.0 - e / 12.0 + 3.0 * e * e / 160.0);
    }
    return std::log(s + std::sqrt(s * s - 1.0));
}

KernelSpec sech_power_kernel(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("sech_power_kernel: exponent must be positive");
    return KernelSpec(KernelSpec::SechPower{r});
}

bool IsotropicAtoms::strict() const {
    for (const auto& [w, r] : atoms)
        if (w > 0.0 && r > 0.0) return true;
    return false;
}

KernelSpec isotropic_kernel(const IsotropicAtoms& atoms) {
    if (atoms.atoms.empty()) throw std::invalid_argument("isotropic_kernel: no atoms");
    bool any = false;
    for (const auto& [w, r] : atoms.atoms) {
        if (w < 0.0 || r < 0.0)
            throw std::invalid_argument("isotropic_kernel: weights and exponents must be nonnegative");
        if (w > 0.0) any = true;
    }
    if (!any) throw std::invalid_argument("isotropic_kernel: all weights are zero");
    return KernelSpec(KernelSpec::Isotropic{atoms.atoms, atoms.strict()});
}

ClassReport check_hyperbolic(const SymMatrix& beta, double tol) {
    const int n = beta.size();
    if (n < 2) throw std::invalid_argument("check_hyperbolic: needs at least two points");

    ClassReport r;
    r.predicate = "hyperbolic";
    r.tol_used = tol;
    r.verdict = true;

    for (int i = 0; i < n; ++i) {
        if (std::abs(beta(i, i) - 1.0) > tol) {
            r.verdict = false;
            r.witness_indices = std::vector<int>{i};
            r.witness_value = beta(i, i);
            r.detail = "diagonal entry " + std::to_string(i) + " differs from 1";
            return r;
        }
    }

    // All pivots checked; they agree in exact arithmetic.
    for (int z = 0; z < n; ++z) {
        SymMatrix m(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                m.set(i, j, beta(i, z) * beta(j, z) - beta(i, j));
        const PsdVerdict v = classify_psd(m);
        if (v.cls == PsdClass::INDEFINITE) {
            r.verdict = false;
            r.witness_indices = std::vector<int>{z};
            r.witness_value = v.lambda_min;
            r.detail = "pivot " + std::to_string(z) + " gives eigenvalue " +
                       std::to_string(v.lambda_min);
            return r;
        }
    }
    return r;
}

LogConditionalReport check_log_conditional(const SymMatrix& L, double tol) {
    const int n = L.size();
    if (n < 2) throw std::invalid_argument("check_log_conditional: needs at least two points");
    if (tol <= 0.0) tol = 1e-9 * std::max(1.0, L.max_abs());

    SymMatrix logs(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = L(i, j);
            if (v < 1.0 - tol)
                throw std::domain_error("check_log_conditional: entry below 1 at (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");
            logs.set(i, j, std::log(std::max(v, 1.0)));
        }

    LogConditionalReport r;
    r.tol_used = tol;
    r.cnd = check_cnd(logs);
    r.verdict = r.cnd.is_cnd;
    r.metrizable = check_metrizable(logs);
    return r;
}

KernelSpec inverse_kernel(const LogCond& log_kernel) {
    return KernelSpec(KernelSpec::InverseLogCond{log_kernel});
}

} // namespace kf
