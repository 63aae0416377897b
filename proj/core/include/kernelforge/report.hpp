#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kf {

/// Outcome of a structural predicate on a finite sample: named verdict
/// plus whichever witness shape the predicate produces (an eigenvalue,
/// an index pair, an index set) and the tolerance that decided it.
struct ClassReport {
    std::string predicate;
    bool verdict = false;
    double tol_used = 0.0;
    std::optional<double> witness_value;
    std::optional<std::pair<int, int>> witness_pair;
    std::optional<std::vector<int>> witness_indices;
    std::string detail;
};

} // namespace kf
