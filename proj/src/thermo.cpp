#include "cutflow/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cutflow/equilibrium.hpp"
#include "cutflow/errors.hpp"
#include "cutflow/quadrature.hpp"

namespace cutflow {

namespace {

constexpr double kPi = std::numbers::pi;

// density with the cut's own edge factors supplied by the caller:
// rho(y) = base(y) * sqrt((y-a)(b-y)) where base = sign h sqrt(prod_other)/(2 pi T)
struct CutDensity {
    const Polynomial* h;
    const EndpointConfig* config;
    int cut;
    double T;
    double base(double y) const {
        double prod = 1.0;
        for (int i = 0; i < config->n_endpoints(); ++i) {
            if (i == 2 * cut || i == 2 * cut + 1) continue;
            prod *= std::fabs(y - config->beta[static_cast<std::size_t>(i)]);
        }
        int sign = ((config->s - 1 - cut) % 2 == 0) ? 1 : -1;
        return (*h)(y)*sign * std::sqrt(prod) / (2.0 * kPi * T);
    }
};

}  // namespace

double lagrange_multiplier(const Potential& pot, double T, const EndpointConfig& config) {
    int widest = 0;
    for (int j = 1; j < config.s; ++j)
        if (config.cut_hi(j) - config.cut_lo(j) > config.cut_hi(widest) - config.cut_lo(widest)) widest = j;
    return lagrange_multiplier_at(pot, T, config, 0.5 * (config.cut_lo(widest) + config.cut_hi(widest)));
}

double lagrange_multiplier_at(const Potential& pot, double T, const EndpointConfig& config, double x0) {
    if (T <= 0.0) throw DomainError("lagrange_multiplier: T must be positive");
    int home = config.cut_of(x0);
    if (home < 0 || x0 == config.cut_lo(home) || x0 == config.cut_hi(home))
        throw DomainError("lagrange_multiplier: x must be strictly inside a cut");
    Polynomial h = h_polynomial(pot, config);

    double log_int = 0.0;
    for (int j = 0; j < config.s; ++j) {
        double a = config.cut_lo(j), b = config.cut_hi(j);
        CutDensity rho{&h, &config, j, T};
        if (j == home) {
            // the log kernel is singular at x0: split there; tanh-sinh
            // absorbs both the log end and the square-root edge
            auto left = tanh_sinh(
                [&](double y, double d) {
                    double da = (y - a <= x0 - y) ? d : y - a;
                    double dx = (y - a <= x0 - y) ? x0 - y : d;
                    return rho.base(y) * std::sqrt(da * (b - y)) * std::log(dx);
                },
                a, x0, 1e-13, 12);
            auto right = tanh_sinh(
                [&](double y, double d) {
                    double dx = (y - x0 <= b - y) ? d : y - x0;
                    double db = (y - x0 <= b - y) ? b - y : d;
                    return rho.base(y) * std::sqrt((y - a) * db) * std::log(dx);
                },
                x0, b, 1e-13, 12);
            log_int += left + right;
        } else {
            auto f = [&](double y) { return rho.base(y) * std::log(std::fabs(x0 - y)); };
            log_int += chebyshev_cut_integral_adaptive(f, a, b, 1e-13);
        }
    }
    return pot(x0) - 2.0 * T * log_int;
}

double free_energy(const Potential& pot, double T, const EndpointConfig& config) {
    Polynomial h = h_polynomial(pot, config);
    double v_rho = 0.0;
    for (int j = 0; j < config.s; ++j) {
        CutDensity rho{&h, &config, j, T};
        auto f = [&](double y) { return pot(y) * rho.base(y); };
        v_rho += chebyshev_cut_integral_adaptive(f, config.cut_lo(j), config.cut_hi(j), 1e-13);
    }
    return -0.5 * T * (v_rho + lagrange_multiplier(pot, T, config));
}

double specific_heat_one_cut(const EndpointConfig& config) {
    if (config.s != 1) throw DomainError("specific_heat_one_cut: one-cut configuration required");
    return 2.0 * std::log((config.beta[1] - config.beta[0]) / 4.0);
}

namespace {

// one-sided second derivative, O(h^2): f''(x0) from f(x0), f(x0+h), ...
double one_sided_d2(double f0, double f1, double f2, double f3, double h) {
    return (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h);
}

// one-sided third derivative, O(h): (-f0 + 3 f1 - 3 f2 + f3)/h^3
double one_sided_d3(double f0, double f1, double f2, double f3, double h) {
    return (-f0 + 3.0 * f1 - 3.0 * f2 + f3) / (h * h * h);
}

}  // namespace

JumpReport third_derivative_jump(const Potential& pot, const TransitionEvent& event) {
    if (event.kind != TransitionKind::Merge)
        throw DomainError("third_derivative_jump: merge event required (births diverge)");

    JumpReport rep;
    rep.beta = event.beta;
    const auto& red = event.config_reduced;
    rep.closed_form_valid = red.s == 1 && std::fabs(red.beta[0] + 2.0) < 1e-6 &&
                            std::fabs(red.beta[1] - 2.0) < 1e-6;
    if (rep.closed_form_valid) {
        double b2 = event.beta * event.beta;
        rep.closed_form = 4.0 / ((4.0 - b2) * (4.0 - b2));
    }

    double scl = std::max(1.0, std::fabs(event.t_c));
    LaunchOptions lopts;
    lopts.t_max_frac = 3e-2;  // stencil reach; launches are Newton-polished to the hodograph manifold

    double h = 2e-3 * scl;
    double t0 = 1e-5 * scl;
    auto v1_at = [&](LaunchSide side, double t) {
        FlowState st = critical_launch(pot, event, side, t, lopts);
        return lagrange_multiplier(pot, st.T, st.config);
    };
    auto f_at = [&](LaunchSide side, double t) {
        FlowState st = critical_launch(pot, event, side, t, lopts);
        return free_energy(pot, st.T, st.config);
    };

    // F''' = -v1'' on each side; the jump is the two-cut value minus the
    // one-cut value
    double va0 = v1_at(LaunchSide::Above, t0), va1 = v1_at(LaunchSide::Above, t0 + h),
           va2 = v1_at(LaunchSide::Above, t0 + 2 * h), va3 = v1_at(LaunchSide::Above, t0 + 3 * h);
    double vb0 = v1_at(LaunchSide::Below, t0), vb1 = v1_at(LaunchSide::Below, t0 + h),
           vb2 = v1_at(LaunchSide::Below, t0 + 2 * h), vb3 = v1_at(LaunchSide::Below, t0 + 3 * h);
    double d2_above = one_sided_d2(va0, va1, va2, va3, h);
    double d2_below = one_sided_d2(vb0, vb1, vb2, vb3, h);
    rep.numeric = d2_above - d2_below;  // = (-v1'')_below - (-v1'')_above

    // literal F stencils with two-level Richardson in h (first-order
    // one-sided formula)
    auto f_jump = [&](double hh) {
        double fa0 = f_at(LaunchSide::Above, t0), fa1 = f_at(LaunchSide::Above, t0 + hh),
               fa2 = f_at(LaunchSide::Above, t0 + 2 * hh), fa3 = f_at(LaunchSide::Above, t0 + 3 * hh);
        double fb0 = f_at(LaunchSide::Below, t0), fb1 = f_at(LaunchSide::Below, t0 + hh),
               fb2 = f_at(LaunchSide::Below, t0 + 2 * hh), fb3 = f_at(LaunchSide::Below, t0 + 3 * hh);
        double d3_above = one_sided_d3(fa0, fa1, fa2, fa3, hh);
        double d3_below = -one_sided_d3(fb0, fb1, fb2, fb3, hh);  // mirrored stencil
        return d3_below - d3_above;
    };
    double j1 = f_jump(8e-3 * scl);
    double j2 = f_jump(4e-3 * scl);
    rep.numeric_f_stencil = 2.0 * j2 - j1;
    return rep;
}

BirthFitReport birth_divergence_check(const Potential& pot, const TransitionEvent& event,
                                      const TraceResult& trace) {
    if (event.kind != TransitionKind::Birth)
        throw DomainError("birth_divergence_check: birth event required");

    BirthFitReport rep;
    double tc = event.t_c;

    auto d3_at = [&](double T, double h) {
        double vm = lagrange_multiplier(pot, T - h, trace.config_at(pot, T - h));
        double v0 = lagrange_multiplier(pot, T, trace.config_at(pot, T));
        double vp = lagrange_multiplier(pot, T + h, trace.config_at(pot, T + h));
        return -(vm - 2.0 * v0 + vp) / (h * h);
    };

    // one-cut reference just below the birth
    double ref = d3_at(tc - 5e-3, 5e-4);

    auto fit = [&](double h_frac) {
        std::vector<double> lt, yv;
        for (int i = 0; i < 7; ++i) {
            double t = 1e-5 * std::pow(100.0, i / 6.0);  // 1e-5 .. 1e-3
            double d3 = d3_at(tc + t, h_frac * t);
            double diff = d3 - ref;
            if (!(diff > 0.0)) continue;
            lt.push_back(std::log(t));
            yv.push_back(std::log(diff) + 2.0 * std::log(std::fabs(std::log(t))));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        auto m = static_cast<double>(lt.size());
        for (std::size_t i = 0; i < lt.size(); ++i) {
            sx += lt[i];
            sy += yv[i];
            sxx += lt[i] * lt[i];
            sxy += lt[i] * yv[i];
        }
        double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        double icept = (sy - slope * sx) / m;
        return std::pair{slope, std::exp(icept)};
    };

    auto [p8, a8] = fit(1.0 / 8.0);
    auto [p16, a16] = fit(1.0 / 16.0);
    rep.exponent = p8;
    rep.amplitude = a8;
    rep.stability = std::fabs(a16 - a8) / std::max(a8, 1e-300);
    rep.conclusive = rep.stability < 0.10;
    return rep;
}

ThermoCurve thermo_curve(const Potential& pot, const TraceResult& trace, double t_min, double t_max,
                         int n_points) {
    if (n_points < 2) throw DomainError("thermo_curve: need at least two grid points");
    ThermoCurve curve;
    curve.samples.reserve(static_cast<std::size_t>(n_points));

    auto v1_of = [&](double T) { return lagrange_multiplier(pot, T, trace.config_at(pot, T)); };

    for (int i = 0; i < n_points; ++i) {
        double T = t_min + (t_max - t_min) * i / (n_points - 1.0);
        ThermoSample smp;
        smp.T = T;
        double h = curve.stencil_h_frac * std::max(1.0, T);

        // keep the whole stencil inside the current phase: one-sided within
        // 10h of a transition (or of the grid ends)
        double lo_lim = t_min, hi_lim = t_max;
        for (const auto& ev : trace.events) {
            if (ev.t_c <= T && ev.t_c > lo_lim) lo_lim = ev.t_c;
            if (ev.t_c >= T && ev.t_c < hi_lim) hi_lim = ev.t_c;
        }
        bool room_below = T - lo_lim >= 10.0 * h;
        bool room_above = hi_lim - T >= 10.0 * h;

        EndpointConfig cfg = trace.config_at(pot, T);
        smp.F = free_energy(pot, T, cfg);
        smp.v1 = lagrange_multiplier(pot, T, cfg);

        if (room_below && room_above) {
            double vm = v1_of(T - h), vp = v1_of(T + h);
            smp.d2F = -(vp - vm) / (2.0 * h);
            smp.d3F = -(vm - 2.0 * smp.v1 + vp) / (h * h);
        } else {
            double dir = room_above ? 1.0 : -1.0;
            // shift the stencil base off the transition if T sits on it
            double base = T;
            double margin = room_above ? (T - lo_lim) : (hi_lim - T);
            if (margin < 1e-9) base = T + dir * 1e-6 * std::max(1.0, T);
            double f0 = v1_of(base), f1 = v1_of(base + dir * h), f2 = v1_of(base + dir * 2 * h),
                   f3 = v1_of(base + dir * 3 * h);
            // d2F = -v1'; the one-sided second difference is direction-even
            smp.d2F = -dir * (-11.0 / 6.0 * f0 + 3.0 * f1 - 1.5 * f2 + f3 / 3.0) / h;
            smp.d3F = -one_sided_d2(f0, f1, f2, f3, h);
        }
        curve.samples.push_back(smp);
    }
    return curve;
}

}  // namespace cutflow
