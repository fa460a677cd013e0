#ifndef CUTFLOW_THERMO_HPP
#define CUTFLOW_THERMO_HPP

#include <vector>

#include "cutflow/flow.hpp"
#include "cutflow/geometry.hpp"
#include "cutflow/poly.hpp"

namespace cutflow {

// Lagrange multiplier v_1 = V(x) - 2T int_J rho(y) log|x-y| dy, evaluated at
// the midpoint of the widest cut (the value is x-independent on the
// support).  -v_1 is dF/dT.
double lagrange_multiplier(const Potential& pot, double T, const EndpointConfig& config);

// Same, evaluated at a chosen x strictly inside a cut.
double lagrange_multiplier_at(const Potential& pot, double T, const EndpointConfig& config, double x);

// Planar free energy in the single-integral form
// F = -(T/2) (int_J V rho dx + v_1), equivalent to the double-log form
// after eliminating the log-log integral through v_1.
double free_energy(const Potential& pot, double T, const EndpointConfig& config);

// One-cut specific heat: d2F/dT2 = 2 log((beta_2 - beta_1)/4).
double specific_heat_one_cut(const EndpointConfig& config);

struct JumpReport {
    double beta = 0.0;             // coalescence point
    bool closed_form_valid = false;  // outer endpoints at -2, 2
    double closed_form = 0.0;        // 4/(4 - beta^2)^2
    double numeric = 0.0;            // one-sided stencils of v_1 (F''' = -v_1'')
    double numeric_f_stencil = 0.0;  // one-sided 4-point stencils of F, Richardson-corrected
};

// Jump of d3F/dT3 across a merging of two cuts, two-cut side minus one-cut
// side; configurations on both sides come from critical_launch.
JumpReport third_derivative_jump(const Potential& pot, const TransitionEvent& event);

struct BirthFitReport {
    double exponent = 0.0;     // fitted power of t in d3F ~ A t^p / log^2 t
    double amplitude = 0.0;    // fitted A
    double stability = 0.0;    // relative shift of A when the stencil is refined
    bool conclusive = false;
};

// Divergence law of d3F/dT3 on the two-cut side of a birth: fits the
// difference to the one-cut reference value against A / (t log^2 t) on
// t in [1e-5, 1e-3].  Qualitative: a pass confirms the exponent -1, no
// finite jump value is claimed.
BirthFitReport birth_divergence_check(const Potential& pot, const TransitionEvent& event,
                                      const TraceResult& trace);

struct ThermoSample {
    double T = 0.0;
    double F = 0.0;
    double v1 = 0.0;
    double d2F = 0.0;
    double d3F = 0.0;
};

struct ThermoCurve {
    std::vector<ThermoSample> samples;
    double stencil_h_frac = 1e-3;  // h = frac * max(1, T)
};

// F, v1 and finite-difference derivative curves over a uniform T grid;
// stencils switch to one-sided within 10h of a recorded transition.
ThermoCurve thermo_curve(const Potential& pot, const TraceResult& trace, double t_min, double t_max,
                         int n_points);

}  // namespace cutflow

#endif
