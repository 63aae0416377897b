#include "kernelforge/point.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kf {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
}

double norm_sq(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

} // namespace

Point Point::euclidean(std::vector<double> coords) {
    require_finite(coords, "Point::euclidean");
    return Point(Euclidean{std::move(coords)});
}

Point Point::product(Point site, std::vector<double> spatial) {
    require_finite(spatial, "Point::product");
    return Point(Product{std::make_shared<const Point>(std::move(site)), std::move(spatial)});
}

Point Point::hyperboloid(std::vector<double> x, double t) {
    require_finite(x, "Point::hyperboloid");
    if (!(t > 0.0)) throw std::invalid_argument("Point::hyperboloid: t must be positive");
    const double t_exact = std::sqrt(1.0 + norm_sq(x));
    if (std::abs(t - t_exact) > 1e-8)
        throw std::invalid_argument("Point::hyperboloid: sheet constraint violated");
    return Point(Hyperboloid{std::move(x), t_exact});
}

Point Point::channel(Point base, int channel, int n_channels) {
    if (n_channels < 1) throw std::invalid_argument("Point::channel: need at least one channel");
    if (channel < 1 || channel > n_channels)
        throw std::invalid_argument("Point::channel: index out of range");
    return Point(Channel{std::make_shared<const Point>(std::move(base)), channel, n_channels});
}

const Point::Euclidean& Point::as_euclidean() const {
    if (const auto* p = std::get_if<Euclidean>(node_.get())) return *p;
    throw std::invalid_argument("expected a Euclidean point, got " + describe());
}

const Point::Product& Point::as_product() const {
    if (const auto* p = std::get_if<Product>(node_.get())) return *p;
    throw std::invalid_argument("expected a product (site, spatial) point, got " + describe());
}

const Point::Hyperboloid& Point::as_hyperboloid() const {
    if (const auto* p = std::get_if<Hyperboloid>(node_.get())) return *p;
    throw std::invalid_argument("expected a hyperboloid point, got " + describe());
}

const Point::Channel& Point::as_channel() const {
    if (const auto* p = std::get_if<Channel>(node_.get())) return *p;
    throw std::invalid_argument("expected a channel-indexed point, got " + describe());
}

std::string Point::describe() const {
    std::ostringstream os;
    if (is_euclidean()) {
        os << "euclidean(d=" << as_euclidean().coords.size() << ")";
    } else if (is_product()) {
        os << "product(site=" << as_product().site->describe()
           << ", spatial_d=" << as_product().spatial.size() << ")";
    } else if (is_hyperboloid()) {
        os << "hyperboloid(m=" << as_hyperboloid().x.size() << ")";
    } else {
        os << "channel(" << as_channel().channel << "/" << as_channel().n_channels << ")";
    }
    return os.str();
}

bool points_equal(const Point& a, const Point& b) {
    if (a.is_euclidean() && b.is_euclidean())
        return a.as_euclidean().coords == b.as_euclidean().coords;
    if (a.is_product() && b.is_product())
        return a.as_product().spatial == b.as_product().spatial &&
               points_equal(*a.as_product().site, *b.as_product().site);
    if (a.is_hyperboloid() && b.is_hyperboloid())
        return a.as_hyperboloid().x == b.as_hyperboloid().x &&
               a.as_hyperboloid().t == b.as_hyperboloid().t;
    if (a.is_channel() && b.is_channel())
        return a.as_channel().channel == b.as_channel().channel &&
               points_equal(*a.as_channel().base, *b.as_channel().base);
    return false;
}

namespace {

int compare_doubles(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    return 0;
}

int variant_rank(const Point& p) {
    if (p.is_euclidean()) return 0;
    if (p.is_product()) return 1;
    if (p.is_hyperboloid()) return 2;
    return 3;
}

} // namespace

int point_compare(const Point& a, const Point& b) {
    const int ra = variant_rank(a);
    const int rb = variant_rank(b);
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (ra) {
        case 0:
            return compare_doubles(a.as_euclidean().coords, b.as_euclidean().coords);
        case 1: {
            const int c = point_compare(*a.as_product().site, *b.as_product().site);
            if (c != 0) return c;
            return compare_doubles(a.as_product().spatial, b.as_product().spatial);
        }
        case 2: {
            const int c = compare_doubles(a.as_hyperboloid().x, b.as_hyperboloid().x);
            if (c != 0) return c;
            const double ta = a.as_hyperboloid().t;
            const double tb = b.as_hyperboloid().t;
            return ta < tb ? -1 : (ta > tb ? 1 : 0);
        }
        default: {
            if (a.as_channel().channel != b.as_channel().channel)
                return a.as_channel().channel < b.as_channel().channel ? -1 : 1;
            return point_compare(*a.as_channel().base, *b.as_channel().base);
        }
    }
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("squared_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

} // namespace kf
