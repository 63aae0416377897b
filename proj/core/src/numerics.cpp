#include "kernelforge/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kf {

SymMatrix::SymMatrix(int n) : n_(n) {
    if (n < 0) throw std::invalid_argument("SymMatrix: negative dimension");
    a_.assign(static_cast<std::size_t>(n) * n, 0.0);
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::invalid_argument("SymMatrix: input rows are not square");
        for (int j = i; j < n; ++j) {
            const double v = rows[i][j];
            if (!std::isfinite(v))
                throw std::invalid_argument("SymMatrix: non-finite entry");
            m.set(i, j, v);
        }
    }
    return m;
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

void SymMatrix::set(int i, int j, double v) {
    a_[static_cast<std::size_t>(i) * n_ + j] = v;
    a_[static_cast<std::size_t>(j) * n_ + i] = v;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double SymMatrix::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

double SymMatrix::frobenius() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

std::vector<double> Spectrum::eigenvector(int k) const {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = vec(i, k);
    return v;
}

const char* to_string(PsdClass c) {
    switch (c) {
        case PsdClass::PD: return "PD";
        case PsdClass::PSD: return "PSD";
        default: return "INDEFINITE";
    }
}

namespace {

double offdiag_frobenius(const std::vector<double>& a, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = a[static_cast<std::size_t>(i) * n + j];
            s += 2.0 * v * v;
        }
    return std::sqrt(s);
}

} // namespace

Spectrum sym_eigen(const SymMatrix& m, bool with_vectors) {
    const int n = m.size();
    for (double v : m.data())
        if (!std::isfinite(v)) throw std::invalid_argument("sym_eigen: non-finite entry");

    Spectrum out;
    out.n = n;
    if (n == 0) return out;

    std::vector<double> a = m.data();
    std::vector<double> v;
    if (with_vectors) {
        v.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;
    }

    const double norm = m.frobenius();
    const double stop = 1e-12 * (norm > 0.0 ? norm : 1.0);
    const int max_sweeps = 64;

    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };

    // Rotations below this threshold are skipped: once every off-diagonal
    // entry sits under stop/n the whole off-diagonal norm is already below
    // stop, so skipping cannot stall convergence.
    const double skip = stop / n;

    for (int sweep = 0; sweep < max_sweeps && offdiag_frobenius(a, n) > stop; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            double* const row_p = a.data() + static_cast<std::size_t>(p) * n;
            for (int q = p + 1; q < n; ++q) {
                const double apq = row_p[q];
                if (std::abs(apq) <= skip) continue;
                double* const row_q = a.data() + static_cast<std::size_t>(q) * n;
                const double app = row_p[p];
                const double aqq = row_q[q];

                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(theta * theta + 1.0))
                                     : 1.0 / (theta - std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // rows p and q rotate contiguously; columns mirror after
                for (int k = 0; k < n; ++k) {
                    const double akp = row_p[k];
                    const double akq = row_q[k];
                    row_p[k] = c * akp - s * akq;
                    row_q[k] = s * akp + c * akq;
                }
                row_p[p] = app - t * apq;
                row_q[q] = aqq + t * apq;
                row_p[q] = 0.0;
                row_q[p] = 0.0;
                for (int k = 0; k < n; ++k) {
                    A(k, p) = row_p[k];
                    A(k, q) = row_q[k];
                }
                if (with_vectors) {
                    for (int k = 0; k < n; ++k) {
                        const double vkp = v[static_cast<std::size_t>(k) * n + p];
                        const double vkq = v[static_cast<std::size_t>(k) * n + q];
                        v[static_cast<std::size_t>(k) * n + p] = c * vkp - s * vkq;
                        v[static_cast<std::size_t>(k) * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return A(i, i) < A(j, j); });

    out.eigenvalues.resize(n);
    for (int k = 0; k < n; ++k) out.eigenvalues[k] = A(order[k], order[k]);

    if (with_vectors) {
        out.has_vectors = true;
        out.eigenvectors.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int k = 0; k < n; ++k) {
            const int src = order[k];
            // Canonical sign: component of largest magnitude is positive.
            int pivot = 0;
            double best = 0.0;
            for (int i = 0; i < n; ++i) {
                const double w = std::abs(v[static_cast<std::size_t>(i) * n + src]);
                if (w > best) {
                    best = w;
                    pivot = i;
                }
            }
            const double sign = (v[static_cast<std::size_t>(pivot) * n + src] < 0.0) ? -1.0 : 1.0;
            for (int i = 0; i < n; ++i)
                out.eigenvectors[static_cast<std::size_t>(i) * n + k] =
                    sign * v[static_cast<std::size_t>(i) * n + src];
        }
    }
    return out;
}

PsdVerdict classify_spectrum(const Spectrum& s, int n,
                             double pd_tol_scale, double psd_tol_scale) {
    const double lmin = s.eigenvalues.empty() ? 0.0 : s.eigenvalues.front();
    const double lmax = s.eigenvalues.empty() ? 0.0 : s.eigenvalues.back();
    const double scale = std::max(1.0, lmax);
    const double pd_tol = pd_tol_scale * scale;
    const double psd_tol = psd_tol_scale * static_cast<double>(n) * scale;

    PsdVerdict v{};
    v.lambda_min = lmin;
    v.lambda_max = lmax;
    if (lmin > pd_tol) {
        v.cls = PsdClass::PD;
        v.tol_used = pd_tol;
    } else if (lmin >= -psd_tol) {
        v.cls = PsdClass::PSD;
        v.tol_used = psd_tol;
    } else {
        v.cls = PsdClass::INDEFINITE;
        v.tol_used = psd_tol;
    }
    return v;
}

PsdVerdict classify_psd(const SymMatrix& a, double pd_tol_scale, double psd_tol_scale) {
    if (pd_tol_scale <= 0.0 || psd_tol_scale <= 0.0)
        throw std::invalid_argument("classify_psd: tolerance scales must be positive");
    return classify_spectrum(sym_eigen(a, false), a.size(), pd_tol_scale, psd_tol_scale);
}

} // namespace kf
