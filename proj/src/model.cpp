#include "cutflow/model.hpp"

#include <algorithm>
#include <cmath>

#include "cutflow/equilibrium.hpp"
#include "cutflow/errors.hpp"

namespace cutflow {

Potential make_potential(const ModelSpec& spec) {
    switch (spec.preset) {
        case ModelSpec::Preset::QuarticEven:
            return Potential::quartic_even();
        case ModelSpec::Preset::BleherEynard:
            return Potential::bleher_eynard(spec.c);
        case ModelSpec::Preset::Coeffs:
            return Potential(spec.coeffs);
    }
    throw DomainError("make_potential: unknown preset");
}

namespace {

// damped Newton on the two one-cut hodograph residuals
FlowState newton_one_cut_seed(const Potential& pot, double T, double lo, double hi) {
    double b1 = lo, b2 = hi;
    for (int it = 0; it < 200; ++it) {
        if (!(b1 < b2)) throw SeedError("one-cut seed Newton lost endpoint ordering");
        EndpointConfig cfg = EndpointConfig::one_cut(b1, b2);
        auto r = hodograph_residual(pot, T, cfg);
        double rn = std::max(std::fabs(r[0]), std::fabs(r[1]));
        if (rn < 1e-12) break;
        double e1 = 1e-7 * std::max(1.0, std::fabs(b1));
        double e2 = 1e-7 * std::max(1.0, std::fabs(b2));
        auto ra = hodograph_residual(pot, T, EndpointConfig::one_cut(b1 + e1, b2));
        auto rb = hodograph_residual(pot, T, EndpointConfig::one_cut(b1, b2 + e2));
        double j11 = (ra[0] - r[0]) / e1, j12 = (rb[0] - r[0]) / e2;
        double j21 = (ra[1] - r[1]) / e1, j22 = (rb[1] - r[1]) / e2;
        double det = j11 * j22 - j12 * j21;
        if (det == 0.0) throw SeedError("one-cut seed Newton: singular Jacobian");
        double d1 = (r[0] * j22 - r[1] * j12) / det;
        double d2 = (r[1] * j11 - r[0] * j21) / det;
        double lambda = 1.0;
        while (lambda > 1.0 / 64.0 && !(b1 - lambda * d1 < b2 - lambda * d2)) lambda *= 0.5;
        b1 -= lambda * d1;
        b2 -= lambda * d2;
        if (it == 199) throw SeedError("one-cut seed Newton did not converge");
    }
    EndpointConfig cfg = EndpointConfig::one_cut(b1, b2);
    auto r = hodograph_residual(pot, T, cfg);
    if (std::max(std::fabs(r[0]), std::fabs(r[1])) > 1e-9)
        throw SeedError("one-cut seed Newton did not reach the hodograph manifold");
    FlowState st;
    st.T = T;
    st.config = cfg;
    st.velocity = endpoint_velocity(pot, cfg);
    return st;
}

}  // namespace

FlowState make_seed(const Potential& pot, const ModelSpec& spec) {
    switch (spec.preset) {
        case ModelSpec::Preset::QuarticEven:
            // two-cut closed form when the range dips below the merge,
            // one-cut closed form otherwise
            if (spec.t_min < 1.0) return seed_quartic_even(2, std::min(spec.t_min, 0.95));
            return seed_quartic_even(1, spec.t_max);
        case ModelSpec::Preset::BleherEynard:
            return seed_be_critical(spec.c);
        case ModelSpec::Preset::Coeffs: {
            double lo, hi;
            if (spec.seed_guess) {
                lo = spec.seed_guess->first;
                hi = spec.seed_guess->second;
            } else {
                // Cauchy-style bound on the critical points of V plus the
                // high-temperature growth of the support
                double bound = 1.0;
                const Polynomial& vp = pot.prime();
                for (int k = 0; k < vp.degree(); ++k)
                    bound = std::max(bound, std::fabs(vp.coeff(k) / vp.coeff(vp.degree())));
                double growth = std::pow(4.0 * spec.t_max / pot.coeff(pot.degree()),
                                         1.0 / pot.degree());
                double reach = 1.0 + bound + growth;
                lo = -reach;
                hi = reach;
            }
            return newton_one_cut_seed(pot, spec.t_max, lo, hi);
        }
    }
    throw DomainError("make_seed: unknown preset");
}

TraceResult run_trace(const Potential& pot, const ModelSpec& spec) {
    if (!(spec.t_min > 0.0) || !(spec.t_min < spec.t_max))
        throw DomainError("trace range must satisfy 0 < t_min < t_max");
    FlowState seed = make_seed(pot, spec);
    TraceOptions opts;
    opts.integrate.abs_tol = spec.tol;
    opts.integrate.rel_tol = spec.tol;
    return trace(pot, seed, spec.t_min, spec.t_max, opts);
}

}  // namespace cutflow
