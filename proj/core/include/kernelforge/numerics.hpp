#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace kf {

/// Dense real symmetric matrix. The upper triangle is authoritative:
/// every write through set() mirrors into the lower triangle, so the
/// stored matrix is symmetric by construction.
class SymMatrix {
public:
    SymMatrix() : n_(0) {}
    explicit SymMatrix(int n);

    /// Builds from full row data; upper-triangle entries win. Throws
    /// std::invalid_argument on ragged input or non-finite entries.
    static SymMatrix from_rows(const std::vector<std::vector<double>>& rows);

    static SymMatrix identity(int n);

    int size() const { return n_; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    void set(int i, int j, double v);

    double trace() const;
    double max_abs() const;
    double frobenius() const;

    const std::vector<double>& data() const { return a_; }

private:
    int n_;
    std::vector<double> a_; // row-major n*n, kept symmetric
};

/// Eigenvalues (ascending) and, on request, an orthonormal eigenbasis.
/// eigenvector(k) is the column paired with eigenvalues[k].
struct Spectrum {
    int n = 0;
    std::vector<double> eigenvalues;          // size n, ascending
    std::vector<double> eigenvectors;         // row-major n*n, empty unless requested
    bool has_vectors = false;

    double vec(int i, int k) const { return eigenvectors[static_cast<std::size_t>(i) * n + k]; }
    std::vector<double> eigenvector(int k) const;
};

enum class PsdClass { PD, PSD, INDEFINITE };

struct PsdVerdict {
    PsdClass cls;
    double lambda_min;
    double lambda_max;
    double tol_used;
};

const char* to_string(PsdClass c);

/// Cyclic Jacobi eigensolver for dense symmetric matrices (deterministic
/// sweep order, convergence when the off-diagonal Frobenius norm drops
/// below 1e-12 * ||A||_F). Sized for n <= 512.
Spectrum sym_eigen(const SymMatrix& a, bool with_vectors = false);

/// Classifies the spectrum of a symmetric matrix:
///   PD          lambda_min >  pd_tol_scale * max(1, lambda_max)
///   PSD         lambda_min >= -psd_tol_scale * n * max(1, lambda_max)
///   INDEFINITE  otherwise
/// tol_used reports the threshold that decided the class.
PsdVerdict classify_psd(const SymMatrix& a,
                        double pd_tol_scale = 1e-8,
                        double psd_tol_scale = 1e-10);

PsdVerdict classify_spectrum(const Spectrum& s, int n,
                             double pd_tol_scale = 1e-8,
                             double psd_tol_scale = 1e-10);

} // namespace kf
