#pragma once

#include <stdexcept>
#include <string>

namespace kf {

/// Quadrature refinement hit its node cap before reaching the requested
/// accuracy. Carries the best estimate obtained so far.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string& what, double partial)
        : std::runtime_error(what), partial_value(partial) {}
    double partial_value;
};

/// A stated hypothesis of a classifier was violated by the given instance.
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The instance is too ill-conditioned for the requested classification
/// (e.g. a tolerance-based equivalence relation came out non-transitive).
class inconsistent_instance_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace kf
