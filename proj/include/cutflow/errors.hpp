#ifndef CUTFLOW_ERRORS_HPP
#define CUTFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cutflow {

// Invalid argument or value outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A quadrature or iteration failed to converge to its target accuracy.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The endpoint flow hit a point where a denominator factor vanishes.
// Carries which factor so that event detection can classify the stop.
struct SingularityError : std::runtime_error {
    enum class Factor { GapCollapse, CutCollapse, HVanishing };

    SingularityError(Factor f, int endpoint_index, const std::string& what)
        : std::runtime_error(what), factor(f), index(endpoint_index) {}

    Factor factor;
    int index;  // endpoint involved (0-based), or left index of the pair
};

// Adaptive step-size underflow before an event could be classified.
struct IntegrationError : std::runtime_error {
    IntegrationError(double T, const std::string& what)
        : std::runtime_error(what), T_stop(T) {}
    double T_stop;
};

// No usable initial endpoint configuration could be produced.
struct SeedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cutflow

#endif
