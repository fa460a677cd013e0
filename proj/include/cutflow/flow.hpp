#ifndef CUTFLOW_FLOW_HPP
#define CUTFLOW_FLOW_HPP

#include <array>
#include <optional>
#include <vector>

#include "cutflow/equilibrium.hpp"
#include "cutflow/geometry.hpp"
#include "cutflow/poly.hpp"

namespace cutflow {

struct FlowState {
    double T = 0.0;
    EndpointConfig config;
    std::array<double, 4> velocity{};  // dbeta/dT, entries 0..2s-1
};

enum class StopCause { RangeEnd, Event };

// Ordered accepted steps of one constant-phase integration; T is strictly
// monotone along samples (either direction).
struct Trajectory {
    int s = 1;
    std::vector<FlowState> samples;
    StopCause cause = StopCause::RangeEnd;

    double t_front() const { return samples.front().T; }
    double t_back() const { return samples.back().T; }
    bool covers(double T) const;

    // configuration at T, re-integrated from the nearest stored sample
    EndpointConfig config_at(const Potential& pot, double T) const;
};

enum class TransitionKind { Merge, Birth };

struct TransitionEvent {
    TransitionKind kind = TransitionKind::Merge;
    double t_c = 0.0;       // critical temperature
    double beta = 0.0;      // coalescence location
    int pair = 0;           // 1-based index l: endpoints (l, l+1) coalesce in the s-side config
    EndpointConfig config_degenerate;  // s-side limit, with the tied pair
    EndpointConfig config_reduced;     // (s-1)-side limit
    double pair_amplitude = 0.0;  // merge: fitted a in  beta_{l+1}-beta_l = a sqrt(|T-T_c|)
    double pair_amplitude_theory = 0.0;  // merge: 4-ish/sqrt(...) from the h-derivative form
    double gamma = 0.0;           // birth: rate constant of the log law
};

// dbeta_i/dT = 4 P_0(beta_i)/(h(beta_i) prod_{j!=i}(beta_i-beta_j)).
// Throws SingularityError when a denominator factor vanishes.
std::array<double, 4> endpoint_velocity(const Potential& pot, const EndpointConfig& config);

// dbeta_i/dt_n = -4 P_n(beta_i)/(h(beta_i) prod_{j!=i}(beta_i-beta_j));
// n = 0 reproduces -endpoint_velocity under t_0 = -T.
std::array<double, 4> whitham_velocity(int n, const Potential& pot, const EndpointConfig& config);

struct IntegrateOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double max_step_frac = 0.01;  // of the requested T range
    // Pair-distance guard.  The flow accumulates O(tol) drift in the
    // effective critical temperature; since the approach window scales as
    // (gap/amplitude)^2, a guard below ~sqrt(tol) would sit inside the
    // drift and stall the integrator off the solution manifold.  1e-4
    // leaves the square-root-law fit with ~1e-9 resolution in T_c.
    double guard_gap = 1e-4;
    double guard_h = 1e-8;       // |h(beta_i)| at an endpoint
    double residual_cap = 1e-6;  // reject steps that break the hodograph constraints
    long max_steps = 2000000;
};

struct IntegrateOutcome {
    Trajectory trajectory;
    std::optional<TransitionEvent> event;
};

// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) from the seed toward
// T_target; stops there or at a detected coalescence guard, in which case
// the classified and refined event is attached.
IntegrateOutcome integrate(const Potential& pot, const FlowState& seed, double T_target,
                           const IntegrateOptions& opts = {});

// Classify and refine the singular stop at the tail of a trajectory.
// Interior-pair (gap) collapse -> merge; cut collapse while moving to lower
// T in the two-cut phase -> birth.  Throws SingularityError for an h-zero
// at an endpoint without pair collapse (singular density).
TransitionEvent detect_transition(const Trajectory& traj, const Potential& pot,
                                  const IntegrateOptions& opts = {});

enum class LaunchSide { Above, Below };

struct LaunchOptions {
    double t_max_frac = 1e-4;   // cap on the offset, times max(1, T_c)
    int corrector_sweeps = 3;
    double corrector_damping = 0.7;
};

// Asymptotic endpoint configuration at T_c -+ t, polished by Newton-type
// sweeps on the hodograph residuals.
FlowState critical_launch(const Potential& pot, const TransitionEvent& event, LaunchSide side, double t,
                          const LaunchOptions& opts = {});

// Closed-form seeds for the reference models.
FlowState seed_quartic_even(int s, double T);
FlowState seed_be_critical(double c);  // state at T_c = 1 + 4c^2, config (-2, 2)

// T -> 0 collapse point of the one-cut support: the global minimum of the
// Bleher-Eynard potential, i.e. the appropriate real root of
// b^3 - 4c b^2 + 2(2c^2-1) b + 8c = 0.  c = 0 is rejected (two symmetric
// minima, no single collapse point).
double be_minimum(double c);

// A full temperature sweep: chained constant-phase trajectories joined by
// critical launches at each transition.
struct TraceResult {
    std::vector<Trajectory> segments;       // ascending in T
    std::vector<TransitionEvent> events;    // ascending in T_c

    const Trajectory& segment_containing(double T) const;
    EndpointConfig config_at(const Potential& pot, double T) const;
};

struct TraceOptions {
    IntegrateOptions integrate;
    LaunchOptions launch;
    double launch_offset_frac = 1e-6;  // times max(1, T_c)
};

TraceResult trace(const Potential& pot, const FlowState& seed, double t_min, double t_max,
                  const TraceOptions& opts = {});

// Exterior-margin zero crossing on the one-cut side of a birth: locates the
// temperature where the variational inequality saturates, the independent
// estimate of T~_c.  Scans the given one-cut trajectory near its high end.
double birth_from_margin(const Potential& pot, const Trajectory& one_cut, double T_hint);

}  // namespace cutflow

#endif
