#ifndef CUTFLOW_MODEL_HPP
#define CUTFLOW_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "cutflow/flow.hpp"
#include "cutflow/poly.hpp"

namespace cutflow {

// A runnable model: potential plus temperature range, tolerances and
// (optionally) a user seed guess for the one-cut Newton solve.
struct ModelSpec {
    enum class Preset { Coeffs, QuarticEven, BleherEynard };
    Preset preset = Preset::QuarticEven;
    double c = 0.5;                           // Bleher-Eynard asymmetry
    std::vector<double> coeffs;               // t_1 .. t_{2p} for Preset::Coeffs
    double t_min = 0.1;
    double t_max = 3.0;
    double tol = 1e-10;
    std::optional<std::pair<double, double>> seed_guess;  // one-cut endpoints at t_max
};

Potential make_potential(const ModelSpec& spec);

// Closed-form seed for a preset; Newton on the one-cut hodograph system
// from the guess (or a coefficient-bound default) otherwise.  Throws
// SeedError when Newton fails to converge to an admissible configuration.
FlowState make_seed(const Potential& pot, const ModelSpec& spec);

// Seed + trace over the requested range.
TraceResult run_trace(const Potential& pot, const ModelSpec& spec);

}  // namespace cutflow

#endif
