#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "kernelforge/descriptors.hpp"
#include "kernelforge/numerics.hpp"
#include "kernelforge/point.hpp"

namespace kf {

class KernelSpec;
using SpecPtr = std::shared_ptr<const KernelSpec>;

/// Matrix-valued kernel descriptor: an l x l family of scalar kernels
/// K_ij(x, y) with K_ij(x, y) = K_ji(y, x). Exposed to scalar code by
/// flattening onto channel-indexed points.
class MatrixKernel {
public:
    struct ConstantMat { SymMatrix a; };
    /// K_ij(x,y) = a_ij * exp(-|x-y|^2 / gamma_ij) on Euclidean bases.
    struct MatrixGaussian { SymMatrix a; SymMatrix gamma; };
    /// K_ij((u,x),(v,y)) = a_ij * M(|x-y| / gamma(u,v)^{1/2}; a_ij*, n_ij)
    /// with a_ij* = sqrt((alpha_i^2 + alpha_j^2)/2) and n_ij = nu_i + nu_j.
    struct MaternProduct {
        SymMatrix a;
        SiteCnd gamma;
        std::vector<double> alphas;
        std::vector<double> nus;
        int m;
    };
    /// K_ij((u,x),(v,y)) = a_ij * M(|x-y|; gamma(u,v)^{1/2}, nu_i + nu_j).
    struct MaternHilbert { SymMatrix a; SiteCnd gamma; std::vector<double> nus; };
    /// K_ij(u,v) = Gamma(nu_i + nu_j) / gamma(u,v)^{nu_i + nu_j} on sites.
    struct GammaPower { SiteCnd gamma; std::vector<double> nus; };
    using Node = std::variant<ConstantMat, MatrixGaussian, MaternProduct,
                              MaternHilbert, GammaPower>;

    explicit MatrixKernel(Node n) : node_(std::move(n)) {}

    int channels() const;
    /// Scalar entry, 0-based channel indices.
    double entry(int i, int j, const Point& x, const Point& y) const;
    const Node& node() const { return node_; }

private:
    Node node_;
};

/// Declarative kernel: a family leaf or a combinator over sub-kernels.
/// Immutable after construction; evaluation is pure.
class KernelSpec {
public:
    // --- family leaves ---
    struct Gaussian { double sigma; };
    struct CmMixture {
        std::vector<std::pair<double, double>> atoms; // (weight, rate)
        bool strict;
    };
    struct GneitingClassic { ScalarFn g; ScalarFn psi; int m; };
    struct GneitingGeneral { SpecPtr site_kernel; SiteCnd gamma; int m; };
    struct Matern { double alpha; double nu; };
    struct SechPower { double r; };
    struct Isotropic {
        std::vector<std::pair<double, double>> atoms; // (weight, exponent)
        bool strict;
    };
    struct InverseLogCond { LogCond log_kernel; };
    // --- combinators ---
    struct Schur { SpecPtr left; SpecPtr right; };
    struct Tensor { SpecPtr left; SpecPtr right; };
    struct Rescale { SpecPtr inner; WeightFn weight; };
    struct Pullback { SpecPtr inner; MapFn map; };
    struct Mixture { std::vector<std::pair<double, SpecPtr>> atoms; };
    struct Flatten { MatrixKernel kernel; };

    using Node = std::variant<Gaussian, CmMixture, GneitingClassic, GneitingGeneral,
                              Matern, SechPower, Isotropic, InverseLogCond,
                              Schur, Tensor, Rescale, Pullback, Mixture, Flatten>;

    explicit KernelSpec(Node n) : node_(std::make_shared<Node>(std::move(n))) {}

    const Node& node() const { return *node_; }

    template <typename T>
    const T* get_if() const { return std::get_if<T>(node_.get()); }

private:
    std::shared_ptr<const Node> node_;
};

/// K(x, y). Symmetric bit-for-bit: eval(s, x, y) == eval(s, y, x).
/// Throws std::invalid_argument on a domain mismatch.
double eval(const KernelSpec& spec, const Point& x, const Point& y);

struct GramMatrix {
    std::vector<Point> points;
    SymMatrix matrix;
    std::optional<PsdVerdict> verdict;
};

/// Assembles [K(x_i, x_j)]; each unordered pair is evaluated once and
/// mirrored. Pair evaluation may be partitioned across threads (capped by
/// the KERNELFORGE_THREADS environment variable); the result is identical
/// regardless of partitioning.
GramMatrix gram(const KernelSpec& spec, const std::vector<Point>& points,
                bool classify = false);

/// Gram matrix only, without the verdict plumbing.
SymMatrix gram_matrix(const KernelSpec& spec, const std::vector<Point>& points);

// --- combinator factories ---
KernelSpec schur(const KernelSpec& left, const KernelSpec& right);
KernelSpec tensor(const KernelSpec& left, const KernelSpec& right);
KernelSpec rescale(const KernelSpec& inner, WeightFn weight);
KernelSpec pullback(const KernelSpec& inner, MapFn map);
KernelSpec mixture(std::vector<std::pair<double, KernelSpec>> atoms);
KernelSpec flatten(MatrixKernel kernel);

/// Expands a point list into channel-indexed points (1..l per base point,
/// channel fastest). The natural sample for a flattened matrix kernel.
std::vector<Point> channel_expand(const std::vector<Point>& bases, int n_channels);

} // namespace kf
