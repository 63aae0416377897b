#include "kernelforge/descriptors.hpp"

#include <cmath>
#include <stdexcept>

#include "kernelforge/hyperbolic.hpp"

namespace kf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

ScalarFn::ScalarFn(Node n) : node_(std::move(n)) {
    if (const auto* t = std::get_if<Table>(&node_)) {
        if (t->t.size() != t->v.size() || t->t.size() < 2)
            throw std::invalid_argument("ScalarFn::table: need matching abscissae/values, at least two");
        for (std::size_t i = 1; i < t->t.size(); ++i)
            if (!(t->t[i] > t->t[i - 1]))
                throw std::invalid_argument("ScalarFn::table: abscissae must be strictly ascending");
    }
}

double ScalarFn::operator()(double t) const {
    return std::visit(
        overloaded{
            [&](const ExpDecay& f) { return std::exp(-f.c * t); },
            [&](const PowerDecay& f) { return std::pow(1.0 + f.c * t, -f.tau); },
            [&](const Power& f) { return std::pow(t, f.beta); },
            [&](const Affine& f) { return f.a + f.b * t; },
            [&](const BernPower& f) { return std::pow(1.0 + f.a * t, f.beta); },
            [&](const LogEPlus&) { return std::log(2.718281828459045235360287 + t); },
            [&](const Log1p&) { return std::log1p(t); },
            [&](const SechPow& f) { return std::pow(1.0 / std::cosh(t), f.r); },
            [&](const Table& f) {
                // linear interpolation inside the table, clamped outside
                if (t <= f.t.front()) return f.v.front();
                if (t >= f.t.back()) return f.v.back();
                std::size_t lo = 0, hi = f.t.size() - 1;
                while (hi - lo > 1) {
                    const std::size_t mid = (lo + hi) / 2;
                    (f.t[mid] <= t ? lo : hi) = mid;
                }
                const double w = (t - f.t[lo]) / (f.t[hi] - f.t[lo]);
                return (1.0 - w) * f.v[lo] + w * f.v[hi];
            },
        },
        node_);
}

std::vector<double> ScalarFn::native_grid() const {
    if (const auto* t = std::get_if<Table>(&node_)) return t->t;
    return {};
}

WeightFn WeightFn::table(std::vector<Point> pts, std::vector<double> vals) {
    if (pts.size() != vals.size())
        throw std::invalid_argument("WeightFn::table: point/value count mismatch");
    return WeightFn(Table{std::move(pts), std::move(vals)});
}

double WeightFn::operator()(const Point& p) const {
    const double w = std::visit(
        overloaded{
            [&](const Constant& f) { return f.c; },
            [&](const CoordAffine& f) {
                const auto& c = p.as_euclidean().coords;
                if (c.size() != f.a.size())
                    throw std::invalid_argument("weight: coordinate dimension mismatch");
                double s = f.b;
                for (std::size_t i = 0; i < c.size(); ++i) s += f.a[i] * c[i];
                return s;
            },
            [&](const NormExp& f) {
                const auto& c = p.as_euclidean().coords;
                double n2 = 0.0;
                for (double x : c) n2 += x * x;
                return std::exp(-f.c * n2);
            },
            [&](const Table& f) {
                for (std::size_t i = 0; i < f.points.size(); ++i)
                    if (points_equal(f.points[i], p)) return f.values[i];
                throw std::invalid_argument("weight table: point not found");
            },
        },
        node_);
    if (!std::isfinite(w)) throw std::runtime_error("weight evaluated to a non-finite value");
    return w;
}

Point MapFn::operator()(const Point& p) const {
    return std::visit(
        overloaded{
            [&](const Identity&) { return p; },
            [&](const Scale& f) {
                auto c = p.as_euclidean().coords;
                for (double& x : c) x *= f.s;
                return Point::euclidean(std::move(c));
            },
            [&](const Affine& f) {
                const auto& c = p.as_euclidean().coords;
                std::vector<double> out(f.matrix.size(), 0.0);
                for (std::size_t i = 0; i < f.matrix.size(); ++i) {
                    if (f.matrix[i].size() != c.size())
                        throw std::invalid_argument("map: matrix/point dimension mismatch");
                    double s = (i < f.offset.size()) ? f.offset[i] : 0.0;
                    for (std::size_t j = 0; j < c.size(); ++j) s += f.matrix[i][j] * c[j];
                    out[i] = s;
                }
                return Point::euclidean(std::move(out));
            },
            [&](const ConstantPoint& f) { return Point::euclidean(f.coords); },
        },
        node_);
}

SiteCnd SiteCnd::table(std::vector<Point> pts, SymMatrix values) {
    if (static_cast<int>(pts.size()) != values.size())
        throw std::invalid_argument("SiteCnd::table: point/matrix size mismatch");
    return SiteCnd(Table{std::move(pts), std::move(values)});
}

double SiteCnd::operator()(const Point& u, const Point& v) const {
    return std::visit(
        overloaded{
            [&](const SqDist& f) {
                return f.offset + f.scale * squared_distance(u.as_euclidean().coords,
                                                             v.as_euclidean().coords);
            },
            [&](const Constant& f) { return f.c; },
            [&](const Table& f) {
                int iu = -1, iv = -1;
                for (std::size_t i = 0; i < f.points.size(); ++i) {
                    if (iu < 0 && points_equal(f.points[i], u)) iu = static_cast<int>(i);
                    if (iv < 0 && points_equal(f.points[i], v)) iv = static_cast<int>(i);
                }
                if (iu < 0 || iv < 0)
                    throw std::invalid_argument("site kernel table: point not found");
                return f.values(iu, iv);
            },
        },
        node_);
}

SiteCnd SiteCnd::scaled(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("SiteCnd::scaled: factor must be positive");
    return std::visit(
        overloaded{
            [&](const SqDist& f) { return SiteCnd(SqDist{t * f.offset, t * f.scale}); },
            [&](const Constant& f) { return SiteCnd(Constant{t * f.c}); },
            [&](const Table& f) {
                SymMatrix m(f.values.size());
                for (int i = 0; i < m.size(); ++i)
                    for (int j = i; j < m.size(); ++j) m.set(i, j, t * f.values(i, j));
                return SiteCnd(Table{f.points, std::move(m)});
            },
        },
        node_);
}

LogCond::LogCond(Node n) : node_(std::move(n)) {
    if (const auto* c = std::get_if<Constant>(&node_)) {
        if (!(c->c >= 1.0)) throw std::invalid_argument("LogCond: constant must be >= 1");
    }
    if (const auto* p = std::get_if<AffineSqPow>(&node_)) {
        if (!(p->offset >= 1.0) || p->scale < 0.0 || !(p->power > 0.0))
            throw std::invalid_argument(
                "LogCond: affine power needs offset >= 1, scale >= 0, power > 0");
    }
}

double LogCond::log_value(const Point& x, const Point& y) const {
    return std::visit(
        overloaded{
            [&](const Constant& f) { return std::log(f.c); },
            [&](const Minkowski&) { return std::log(minkowski_form(x, y)); },
            [&](const ExpCnd& f) { return f.gamma(x, y); },
            [&](const AffineSqPow& f) {
                return f.power * std::log(f.offset +
                                          f.scale * squared_distance(x.as_euclidean().coords,
                                                                     y.as_euclidean().coords));
            },
        },
        node_);
}

double LogCond::value(const Point& x, const Point& y) const {
    return std::visit(
        overloaded{
            [&](const Constant& f) { return f.c; },
            [&](const Minkowski&) { return minkowski_form(x, y); },
            [&](const ExpCnd& f) { return std::exp(f.gamma(x, y)); },
            [&](const AffineSqPow& f) {
                return std::pow(f.offset + f.scale * squared_distance(x.as_euclidean().coords,
                                                                      y.as_euclidean().coords),
                                f.power);
            },
        },
        node_);
}

} // namespace kf
