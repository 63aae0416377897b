#include "kernelforge/mmd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kernelforge/io.hpp"

namespace kf {

DiscreteMeasure DiscreteMeasure::empirical(const std::vector<Point>& sample, double sign) {
    if (sample.empty()) throw std::invalid_argument("empirical measure: empty sample");
    DiscreteMeasure m;
    const double w = sign / static_cast<double>(sample.size());
    m.atoms.reserve(sample.size());
    for (const auto& p : sample) m.atoms.emplace_back(p, w);
    return m;
}

double mmd_inner(const KernelSpec& spec, const DiscreteMeasure& mu,
                 const DiscreteMeasure& nu) {
    if (mu.atoms.empty() || nu.atoms.empty())
        throw std::invalid_argument("mmd_inner: empty measure");
    double s = 0.0;
    for (const auto& [x, cx] : mu.atoms)
        for (const auto& [y, cy] : nu.atoms) s += cx * cy * eval(spec, x, y);
    return s;
}

double energy(const KernelSpec& spec, const DiscreteMeasure& lam) {
    return mmd_inner(spec, lam, lam);
}

EnergyReport energy_report(const KernelSpec& spec, const DiscreteMeasure& lam) {
    EnergyReport r;
    r.value = energy(spec, lam);
    r.n_atoms = static_cast<int>(lam.atoms.size());
    r.kernel_id = io::fnv1a64_hex(io::kernel_to_json(spec).dump());
    return r;
}

namespace {

std::vector<Point> sorted_sample(std::vector<Point> sample) {
    std::sort(sample.begin(), sample.end(),
              [](const Point& a, const Point& b) { return point_compare(a, b) < 0; });
    return sample;
}

double mean_cross(const KernelSpec& spec, const std::vector<Point>& a,
                  const std::vector<Point>& b) {
    double s = 0.0;
    for (const auto& x : a)
        for (const auto& y : b) s += eval(spec, x, y);
    return s / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

bool sample_less(const std::vector<Point>& a, const std::vector<Point>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int c = point_compare(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

} // namespace

double mmd_distance(const KernelSpec& spec, const std::vector<Point>& sample_a,
                    const std::vector<Point>& sample_b) {
    if (sample_a.empty() || sample_b.empty())
        throw std::invalid_argument("mmd_distance: empty sample");

    std::vector<Point> a = sorted_sample(sample_a);
    std::vector<Point> b = sorted_sample(sample_b);
    if (sample_less(b, a)) std::swap(a, b); // canonical slot order

    const double saa = mean_cross(spec, a, a);
    const double sbb = mean_cross(spec, b, b);
    const double sab = mean_cross(spec, a, b);
    const double e = saa + sbb - 2.0 * sab;
    return e > 0.0 ? std::sqrt(e) : 0.0;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Unit-norm weight vector from a per-trial generator (own Box-Muller so
/// the stream does not depend on the standard library's distribution).
std::vector<double> random_unit_weights(int n, std::uint64_t trial_seed) {
    std::uint64_t state = trial_seed;
    auto next_u01 = [&]() {
        state = splitmix64(state);
        return (static_cast<double>(state >> 11) + 0.5) * 0x1.0p-53;
    };
    std::vector<double> w(n);
    for (int i = 0; i < n; i += 2) {
        const double u1 = next_u01();
        const double u2 = next_u01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        w[i] = r * std::cos(6.283185307179586 * u2);
        if (i + 1 < n) w[i + 1] = r * std::sin(6.283185307179586 * u2);
    }
    double norm = 0.0;
    for (double v : w) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : w) v /= norm;
    return w;
}

} // namespace

ClassReport spd_probe(const KernelSpec& spec, const std::vector<Point>& points,
                      int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("spd_probe: trials must be >= 1");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points_equal(points[i], points[j]))
                throw std::invalid_argument("spd_probe: duplicate points at indices " +
                                            std::to_string(i) + " and " + std::to_string(j));

    const GramMatrix g = gram(spec, points, true);
    const int n = static_cast<int>(points.size());

    double min_energy = 0.0;
    for (int t = 0; t < trials; ++t) {
        const auto w = random_unit_weights(n, splitmix64(seed + static_cast<std::uint64_t>(t)));
        double e = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) e += w[i] * w[j] * g.matrix(i, j);
        if (t == 0 || e < min_energy) min_energy = e;
    }

    ClassReport r;
    r.predicate = "spd";
    r.verdict = g.verdict->cls == PsdClass::PD;
    r.tol_used = g.verdict->tol_used;
    r.witness_value = min_energy;
    r.detail = std::string(to_string(g.verdict->cls)) + ", lambda_min=" +
               std::to_string(g.verdict->lambda_min) + ", min energy over " +
               std::to_string(trials) + " random weight vectors=" + std::to_string(min_energy);
    return r;
}

} // namespace kf
