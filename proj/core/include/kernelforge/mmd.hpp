#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kernelforge/kernel_spec.hpp"
#include "kernelforge/point.hpp"
#include "kernelforge/report.hpp"

namespace kf {

/// Finite signed measure: a weighted list of point atoms. Weights may be
/// negative and need not sum to anything; signed measures are exactly the
/// test objects for strictness.
struct DiscreteMeasure {
    std::vector<std::pair<Point, double>> atoms;

    static DiscreteMeasure dirac(Point p, double w = 1.0) {
        return DiscreteMeasure{{{std::move(p), w}}};
    }
    static DiscreteMeasure empirical(const std::vector<Point>& sample, double sign = 1.0);
};

/// Double sum  sum_ij c_i c_j K(x_i, x_j); nonnegative whenever the
/// kernel is positive definite.
double energy(const KernelSpec& spec, const DiscreteMeasure& lam);

/// Energy value plus provenance: atom count and a digest of the kernel's
/// serialized form, for report files.
struct EnergyReport {
    double value;
    int n_atoms;
    std::string kernel_id;
};

EnergyReport energy_report(const KernelSpec& spec, const DiscreteMeasure& lam);

/// Bilinear form  sum_ij c_i d_j K(x_i, y_j); mmd_inner(l, l) == energy(l).
double mmd_inner(const KernelSpec& spec, const DiscreteMeasure& mu,
                 const DiscreteMeasure& nu);

/// sqrt(energy(emp_a - emp_b)) with empirical weights 1/|A|, -1/|B|.
/// Samples are canonically sorted first, so the value is invariant under
/// sample permutation and exactly zero for equal multisets.
double mmd_distance(const KernelSpec& spec, const std::vector<Point>& sample_a,
                    const std::vector<Point>& sample_b);

/// Strictness probe on a distinct-point sample: deterministic verdict from
/// the Gram spectrum (PD means strictly positive definite on this sample),
/// plus the minimum energy over `trials` random unit-norm weight vectors
/// (reported as witness_value).
ClassReport spd_probe(const KernelSpec& spec, const std::vector<Point>& points,
                      int trials, std::uint64_t seed);

} // namespace kf
