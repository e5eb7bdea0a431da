#pragma once

#include <stdexcept>
#include <string>

namespace discern {

// Rejected input: dimension mismatch, schema violation, domain violation.
struct InvalidInput : std::invalid_argument {
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// Moment vector admits no shape of the requested family.
struct InfeasibleMoments : std::runtime_error {
    explicit InfeasibleMoments(const std::string& what) : std::runtime_error(what) {}
};

// Numerical reconstruction did not converge (or converged outside the domain).
struct ReconstructionFailed : std::runtime_error {
    double best_residual;
    explicit ReconstructionFailed(const std::string& what, double residual)
        : std::runtime_error(what), best_residual(residual) {}
};

}  // namespace discern
