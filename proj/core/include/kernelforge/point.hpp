#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace kf {

/// Immutable sample-space point. One of:
///   Euclidean    coordinate vector in R^d
///   Product      (site point, spatial vector) for space-time domains
///   Hyperboloid  (x, t) with t^2 - |x|^2 = 1, t >= 1
///   Channel      (base point, channel index in 1..n_channels)
class Point {
public:
    struct Euclidean {
        std::vector<double> coords;
    };
    struct Product {
        std::shared_ptr<const Point> site;
        std::vector<double> spatial;
    };
    struct Hyperboloid {
        std::vector<double> x;
        double t;
    };
    struct Channel {
        std::shared_ptr<const Point> base;
        int channel;    // 1-based
        int n_channels; // declared channel count
    };
    using Node = std::variant<Euclidean, Product, Hyperboloid, Channel>;

    static Point euclidean(std::vector<double> coords);
    static Point product(Point site, std::vector<double> spatial);
    /// Validates t^2 - |x|^2 = 1 within 1e-8 drift, then renormalizes t.
    static Point hyperboloid(std::vector<double> x, double t);
    static Point channel(Point base, int channel, int n_channels);

    const Node& node() const { return *node_; }

    bool is_euclidean() const { return std::holds_alternative<Euclidean>(*node_); }
    bool is_product() const { return std::holds_alternative<Product>(*node_); }
    bool is_hyperboloid() const { return std::holds_alternative<Hyperboloid>(*node_); }
    bool is_channel() const { return std::holds_alternative<Channel>(*node_); }

    const Euclidean& as_euclidean() const;
    const Product& as_product() const;
    const Hyperboloid& as_hyperboloid() const;
    const Channel& as_channel() const;

    std::string describe() const;

private:
    explicit Point(Node n) : node_(std::make_shared<Node>(std::move(n))) {}
    std::shared_ptr<const Node> node_;
};

/// Exact structural equality (coordinate-wise, bit-for-bit).
bool points_equal(const Point& a, const Point& b);

/// Deterministic total order (variant kind, then lexicographic on fields).
/// Returns <0, 0, >0. Used to canonicalize sample order where a result
/// must not depend on input permutation.
int point_compare(const Point& a, const Point& b);

/// Squared Euclidean distance of two coordinate vectors of equal length.
double squared_distance(const std::vector<double>& a, const std::vector<double>& b);

} // namespace kf
