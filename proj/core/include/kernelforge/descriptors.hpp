#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "kernelforge/numerics.hpp"
#include "kernelforge/point.hpp"

namespace kf {

/// Scalar function on [0, inf) drawn from a closed, serializable catalog.
/// Used as completely-monotone / Bernstein candidates and as the g / psi
/// slots of the space-time family.
class ScalarFn {
public:
    struct ExpDecay { double c; };              // e^{-c t}
    struct PowerDecay { double c; double tau; } ; // (1 + c t)^{-tau}
    struct Power { double beta; };              // t^beta
    struct Affine { double a; double b; };      // a + b t
    struct BernPower { double a; double beta; }; // (1 + a t)^beta
    struct LogEPlus {};                         // log(e + t)
    struct Log1p {};                            // log(1 + t)
    struct SechPow { double r; };               // sech(t)^r
    struct Table { std::vector<double> t; std::vector<double> v; };
    using Node = std::variant<ExpDecay, PowerDecay, Power, Affine, BernPower,
                              LogEPlus, Log1p, SechPow, Table>;

    explicit ScalarFn(Node n);

    double operator()(double t) const;
    const Node& node() const { return node_; }

    /// For tables: the natural evaluation grid. Empty otherwise.
    std::vector<double> native_grid() const;

    static ScalarFn exp_decay(double c) { return ScalarFn(ExpDecay{c}); }
    static ScalarFn power_decay(double c, double tau) { return ScalarFn(PowerDecay{c, tau}); }
    static ScalarFn power(double beta) { return ScalarFn(Power{beta}); }
    static ScalarFn affine(double a, double b) { return ScalarFn(Affine{a, b}); }
    static ScalarFn bern_power(double a, double beta) { return ScalarFn(BernPower{a, beta}); }
    static ScalarFn log_e_plus() { return ScalarFn(LogEPlus{}); }
    static ScalarFn log1p_fn() { return ScalarFn(Log1p{}); }
    static ScalarFn sech_pow(double r) { return ScalarFn(SechPow{r}); }
    static ScalarFn table(std::vector<double> t, std::vector<double> v) {
        return ScalarFn(Table{std::move(t), std::move(v)});
    }

private:
    Node node_;
};

/// Pointwise weight for the f(x) K(x,y) f(y) combinator.
class WeightFn {
public:
    struct Constant { double c; };
    struct CoordAffine { std::vector<double> a; double b; }; // <a, x> + b
    struct NormExp { double c; };                            // e^{-c |x|^2}
    struct Table { std::vector<Point> points; std::vector<double> values; };
    using Node = std::variant<Constant, CoordAffine, NormExp, Table>;

    explicit WeightFn(Node n) : node_(std::move(n)) {}

    /// Throws std::runtime_error if the weight comes out non-finite and
    /// std::invalid_argument when a table lookup misses.
    double operator()(const Point& p) const;
    const Node& node() const { return node_; }

    static WeightFn constant(double c) { return WeightFn(Constant{c}); }
    static WeightFn coord_affine(std::vector<double> a, double b) {
        return WeightFn(CoordAffine{std::move(a), b});
    }
    static WeightFn norm_exp(double c) { return WeightFn(NormExp{c}); }
    static WeightFn table(std::vector<Point> pts, std::vector<double> vals);

private:
    Node node_;
};

/// Domain map for kernel pullback, Euclidean to Euclidean.
class MapFn {
public:
    struct Identity {};
    struct Scale { double s; };
    struct Affine { std::vector<std::vector<double>> matrix; std::vector<double> offset; };
    struct ConstantPoint { std::vector<double> coords; };
    using Node = std::variant<Identity, Scale, Affine, ConstantPoint>;

    explicit MapFn(Node n) : node_(std::move(n)) {}

    Point operator()(const Point& p) const;
    const Node& node() const { return node_; }

    static MapFn identity() { return MapFn(Identity{}); }
    static MapFn scale(double s) { return MapFn(Scale{s}); }
    static MapFn affine(std::vector<std::vector<double>> m, std::vector<double> off) {
        return MapFn(Affine{std::move(m), std::move(off)});
    }
    static MapFn constant_point(std::vector<double> coords) {
        return MapFn(ConstantPoint{std::move(coords)});
    }

private:
    Node node_;
};

/// Conditionally-negative-definite kernel descriptor on site points.
class SiteCnd {
public:
    struct SqDist { double offset; double scale; }; // offset + scale |u-v|^2
    struct Constant { double c; };
    struct Table { std::vector<Point> points; SymMatrix values; };
    using Node = std::variant<SqDist, Constant, Table>;

    explicit SiteCnd(Node n) : node_(std::move(n)) {}

    double operator()(const Point& u, const Point& v) const;
    const Node& node() const { return node_; }

    /// The same kernel multiplied by t (t * gamma stays CND for t > 0).
    SiteCnd scaled(double t) const;

    static SiteCnd sq_dist(double offset = 0.0, double scale = 1.0) {
        return SiteCnd(SqDist{offset, scale});
    }
    static SiteCnd constant(double c) { return SiteCnd(Constant{c}); }
    static SiteCnd table(std::vector<Point> pts, SymMatrix values);

private:
    Node node_;
};

/// Kernel L : X x X -> [1, inf) whose logarithm is the object of interest.
/// log_value is computed natively per variant so 1/L = e^{-log L} never
/// round-trips through an overflowing exponential.
class LogCond {
public:
    struct Constant { double c; };   // c >= 1
    struct Minkowski {};             // t_x t_y - <x,y> on hyperboloid points
    struct ExpCnd { SiteCnd gamma; }; // L = e^{gamma}, gamma >= 0
    /// (offset + scale |x-y|^2)^power with offset >= 1; the logarithm is a
    /// Bernstein function of the squared distance, hence CND.
    struct AffineSqPow { double offset; double scale; double power; };
    using Node = std::variant<Constant, Minkowski, ExpCnd, AffineSqPow>;

    explicit LogCond(Node n);

    double value(const Point& x, const Point& y) const;
    double log_value(const Point& x, const Point& y) const;
    const Node& node() const { return node_; }

    static LogCond constant(double c) { return LogCond(Constant{c}); }
    static LogCond minkowski() { return LogCond(Minkowski{}); }
    static LogCond exp_cnd(SiteCnd gamma) { return LogCond(ExpCnd{std::move(gamma)}); }
    static LogCond affine_sq_pow(double offset, double scale, double power) {
        return LogCond(AffineSqPow{offset, scale, power});
    }

private:
    Node node_;
};

} // namespace kf
