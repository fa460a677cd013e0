#include "cutflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cutflow/errors.hpp"

namespace cutflow {

namespace {

constexpr double kPi = std::numbers::pi;
using Vec4 = std::array<double, 4>;

EndpointConfig make_config(int s, const Vec4& y) {
    EndpointConfig c;
    c.s = s;
    c.beta = y;
    for (int i = 1; i < 2 * s; ++i)
        if (!(y[static_cast<std::size_t>(i - 1)] < y[static_cast<std::size_t>(i)]))
            throw DomainError("endpoints out of order");
    return c;
}

}  // namespace

std::array<double, 4> endpoint_velocity(const Potential& pot, const EndpointConfig& config) {
    const int n = config.n_endpoints();
    Polynomial h = h_polynomial(pot, config);
    double center = (config.s == 2) ? c_center(config) : 0.0;
    Vec4 v{};
    for (int i = 0; i < n; ++i) {
        double bi = config.beta[static_cast<std::size_t>(i)];
        double p0 = (config.s == 1) ? 1.0 : (bi - center);
        double denom = h(bi);
        if (denom == 0.0) throw SingularityError(SingularityError::Factor::HVanishing, i, "h vanishes at an endpoint");
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double d = bi - config.beta[static_cast<std::size_t>(j)];
            if (d == 0.0) {
                int lo = std::min(i, j);
                auto f = (lo % 2 == 0) ? SingularityError::Factor::CutCollapse
                                       : SingularityError::Factor::GapCollapse;
                throw SingularityError(f, lo, "coalesced endpoints");
            }
            denom *= d;
        }
        v[static_cast<std::size_t>(i)] = 4.0 * p0 / denom;
    }
    return v;
}

std::array<double, 4> whitham_velocity(int n, const Potential& pot, const EndpointConfig& config) {
    if (n < 0 || n > pot.degree()) throw DomainError("whitham_velocity: n outside 0..deg V");
    const int m = config.n_endpoints();
    Polynomial h = h_polynomial(pot, config);
    Polynomial pn = p_k(n, config);
    Vec4 v{};
    for (int i = 0; i < m; ++i) {
        double bi = config.beta[static_cast<std::size_t>(i)];
        double denom = h(bi);
        if (denom == 0.0) throw SingularityError(SingularityError::Factor::HVanishing, i, "h vanishes at an endpoint");
        for (int j = 0; j < m; ++j) {
            if (j == i) continue;
            double d = bi - config.beta[static_cast<std::size_t>(j)];
            if (d == 0.0) {
                int lo = std::min(i, j);
                auto f = (lo % 2 == 0) ? SingularityError::Factor::CutCollapse
                                       : SingularityError::Factor::GapCollapse;
                throw SingularityError(f, lo, "coalesced endpoints");
            }
            denom *= d;
        }
        v[static_cast<std::size_t>(i)] = -4.0 * pn(bi) / denom;
    }
    return v;
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0, kB5 = -2187.0 / 6784.0,
                 kB6 = 11.0 / 84.0;
constexpr double kE1 = 5179.0 / 57600.0, kE3 = 7571.0 / 16695.0, kE4 = 393.0 / 640.0,
                 kE5 = -92097.0 / 339200.0, kE6 = 187.0 / 2100.0, kE7 = 1.0 / 40.0;

struct RkStep {
    Vec4 y;        // 5th-order solution
    Vec4 k_last;   // derivative at the end point (FSAL)
    double err;    // scaled error norm
};

Vec4 rhs(const Potential& pot, int s, const Vec4& y) {
    return endpoint_velocity(pot, make_config(s, y));
}

RkStep rk_step(const Potential& pot, int s, const Vec4& y, const Vec4& k1, double h, double abs_tol,
               double rel_tol) {
    const int n = 2 * s;
    auto comb = [&](std::initializer_list<std::pair<double, const Vec4*>> terms) {
        Vec4 out = y;
        for (auto [c, k] : terms)
            for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] += h * c * (*k)[static_cast<std::size_t>(i)];
        return out;
    };
    Vec4 k2 = rhs(pot, s, comb({{kA21, &k1}}));
    Vec4 k3 = rhs(pot, s, comb({{kA31, &k1}, {kA32, &k2}}));
    Vec4 k4 = rhs(pot, s, comb({{kA41, &k1}, {kA42, &k2}, {kA43, &k3}}));
    Vec4 k5 = rhs(pot, s, comb({{kA51, &k1}, {kA52, &k2}, {kA53, &k3}, {kA54, &k4}}));
    Vec4 k6 = rhs(pot, s, comb({{kA61, &k1}, {kA62, &k2}, {kA63, &k3}, {kA64, &k4}, {kA65, &k5}}));
    Vec4 y5 = comb({{kB1, &k1}, {kB3, &k3}, {kB4, &k4}, {kB5, &k5}, {kB6, &k6}});
    Vec4 k7 = rhs(pot, s, y5);

    RkStep out;
    out.y = y5;
    out.k_last = k7;
    out.err = 0.0;
    for (int i = 0; i < n; ++i) {
        auto si = static_cast<std::size_t>(i);
        double y4i = y[si] + h * (kE1 * k1[si] + kE3 * k3[si] + kE4 * k4[si] + kE5 * k5[si] + kE6 * k6[si] +
                                  kE7 * k7[si]);
        double sc = abs_tol + rel_tol * std::max(std::fabs(y[si]), std::fabs(y5[si]));
        out.err = std::max(out.err, std::fabs(y5[si] - y4i) / sc);
    }
    return out;
}

double min_pair_distance(const Vec4& y, int n, int* index = nullptr) {
    double dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < n; ++i) {
        double d = y[static_cast<std::size_t>(i + 1)] - y[static_cast<std::size_t>(i)];
        if (d < dmin) {
            dmin = d;
            if (index) *index = i;
        }
    }
    return dmin;
}

double min_endpoint_h(const Potential& pot, int s, const Vec4& y) {
    Polynomial h = h_polynomial(pot, make_config(s, y));
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2 * s; ++i) m = std::min(m, std::fabs(h(y[static_cast<std::size_t>(i)])));
    return m;
}

// min over the support of the density-sign factor sign_j h(x): an interior
// zero crossing signals a merge approached from the low-s side.  The sample
// argmin is polished to the true interior extremum of h (Newton on h'), so
// a quadratic touch is resolved far below the sample spacing.
double support_sign_h_min(const Potential& pot, int s, const Vec4& y, double* arg = nullptr) {
    EndpointConfig cfg = make_config(s, y);
    Polynomial h = h_polynomial(pot, cfg);
    Polynomial hp = h.derivative();
    Polynomial hpp = hp.derivative();
    double m = std::numeric_limits<double>::infinity();
    const int n_samples = 65;
    for (int j = 0; j < s; ++j) {
        double a = cfg.cut_lo(j), b = cfg.cut_hi(j);
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        int sign = ((s - 1 - j) % 2 == 0) ? 1 : -1;
        double cut_min = std::numeric_limits<double>::infinity();
        double cut_arg = mid;
        for (int i = 0; i < n_samples; ++i) {
            double x = mid + half * std::cos((i + 0.5) * kPi / n_samples);
            double v = sign * h(x);
            if (v < cut_min) {
                cut_min = v;
                cut_arg = x;
            }
        }
        double z = cut_arg;
        for (int it = 0; it < 40; ++it) {
            double d2 = hpp(z);
            if (d2 == 0.0) break;
            double step = hp(z) / d2;
            z -= step;
            if (std::fabs(step) < 1e-14 * std::max(1.0, std::fabs(z))) break;
        }
        if (z > a && z < b) {
            double v = sign * h(z);
            if (v < cut_min) {
                cut_min = v;
                cut_arg = z;
            }
        }
        if (cut_min < m) {
            m = cut_min;
            if (arg) *arg = cut_arg;
        }
    }
    return m;
}

double max_abs_residual(const Potential& pot, double T, int s, const Vec4& y) {
    auto res = hodograph_residual(pot, T, make_config(s, y));
    double m = 0.0;
    for (double r : res) m = std::max(m, std::fabs(r));
    return m;
}

}  // namespace

bool Trajectory::covers(double T) const {
    double lo = std::min(t_front(), t_back()), hi = std::max(t_front(), t_back());
    return T >= lo - 1e-12 && T <= hi + 1e-12;
}

EndpointConfig Trajectory::config_at(const Potential& pot, double T) const {
    if (samples.empty()) throw DomainError("config_at: empty trajectory");
    // nearest stored sample
    std::size_t best = 0;
    double dbest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double d = std::fabs(samples[i].T - T);
        if (d < dbest) {
            dbest = d;
            best = i;
        }
    }
    const FlowState& from = samples[best];
    if (dbest < 1e-14 * std::max(1.0, std::fabs(T))) return from.config;
    IntegrateOptions opts;
    opts.rel_tol = 1e-12;
    opts.abs_tol = 1e-12;
    opts.max_step_frac = 1.0;
    auto out = integrate(pot, from, T, opts);
    if (out.trajectory.samples.back().T != T && std::fabs(out.trajectory.samples.back().T - T) > 1e-10)
        throw NumericError("config_at: re-integration stopped before the requested temperature");
    return out.trajectory.samples.back().config;
}

IntegrateOutcome integrate(const Potential& pot, const FlowState& seed, double T_target,
                           const IntegrateOptions& opts) {
    const int s = seed.config.s;
    const int n = 2 * s;
    IntegrateOutcome out;
    out.trajectory.s = s;

    Vec4 y = seed.config.beta;
    double T = seed.T;

    if (max_abs_residual(pot, T, s, y) > 1e-8)
        throw DomainError("integrate: seed does not satisfy the hodograph equations");

    double dir = (T_target > T) ? 1.0 : -1.0;
    double span = std::fabs(T_target - T);
    if (span == 0.0) {
        out.trajectory.samples.push_back(seed);
        return out;
    }
    double hmax = std::max(opts.max_step_frac * span, 1e-9);

    Vec4 k1 = rhs(pot, s, y);
    out.trajectory.samples.push_back(FlowState{T, make_config(s, y), k1});

    double monitor_prev = support_sign_h_min(pot, s, y);
    double h = dir * std::min(hmax, 1e-4 * span);

    auto land_fraction = [&](const Vec4& base_y, const Vec4& base_k, double base_T, double h_full,
                             auto&& crossed) {
        // bisect the step fraction to land on the guard boundary
        double lo = 0.0, hi = 1.0;
        Vec4 y_hi{};
        RkStep st{};
        for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
            double midf = 0.5 * (lo + hi);
            bool ok = true;
            try {
                st = rk_step(pot, s, base_y, base_k, midf * h_full, opts.abs_tol, opts.rel_tol);
            } catch (const std::exception&) {
                ok = false;
            }
            if (ok && !crossed(st.y)) {
                lo = midf;
            } else {
                hi = midf;
                if (ok) y_hi = st.y;
            }
        }
        double frac = std::max(lo, 1e-12);
        st = rk_step(pot, s, base_y, base_k, frac * h_full, opts.abs_tol, opts.rel_tol);
        return std::pair{base_T + frac * h_full, st};
    };

    for (long step = 0; step < opts.max_steps; ++step) {
        if ((T + h - T_target) * dir > 0.0) h = T_target - T;

        bool stage_failed = false;
        RkStep st{};
        try {
            st = rk_step(pot, s, y, k1, h, opts.abs_tol, opts.rel_tol);
        } catch (const std::exception&) {
            stage_failed = true;
        }

        bool ordered = true;
        if (!stage_failed)
            for (int i = 0; i + 1 < n && ordered; ++i)
                ordered = st.y[static_cast<std::size_t>(i)] < st.y[static_cast<std::size_t>(i + 1)];

        if (stage_failed || !ordered || st.err > 1.0) {
            double shrink = stage_failed || !ordered ? 0.5 : std::max(0.2, 0.9 * std::pow(st.err, -0.2));
            h *= shrink;
            if (std::fabs(h) < 1e-14 * std::max(1.0, std::fabs(T))) {
                // cannot advance: classify if we are pinned on a coalescence
                if (min_pair_distance(y, n) < 100.0 * opts.guard_gap) {
                    out.trajectory.cause = StopCause::Event;
                    out.event = detect_transition(out.trajectory, pot, opts);
                    return out;
                }
                throw IntegrationError(T, "integrate: step size underflow before event classification");
            }
            continue;
        }

        // hodograph constraints are first integrals of the flow; a step that
        // breaks them beyond tolerance is rejected outright
        if (max_abs_residual(pot, T + h, s, st.y) > opts.residual_cap) {
            h *= 0.5;
            if (std::fabs(h) < 1e-14 * std::max(1.0, std::fabs(T)))
                throw IntegrationError(T, "integrate: cannot hold the hodograph constraints");
            continue;
        }

        double T_new = T + h;
        Vec4 y_new = st.y;
        Vec4 k_new = st.k_last;

        // guards: pair coalescence and h at an endpoint
        if (min_pair_distance(y_new, n) < opts.guard_gap) {
            auto [T_land, st_land] = land_fraction(y, k1, T, h, [&](const Vec4& yy) {
                return min_pair_distance(yy, n) < opts.guard_gap;
            });
            out.trajectory.samples.push_back(FlowState{T_land, make_config(s, st_land.y), st_land.k_last});
            out.trajectory.cause = StopCause::Event;
            out.event = detect_transition(out.trajectory, pot, opts);
            return out;
        }
        if (s >= 1 && min_endpoint_h(pot, s, y_new) < opts.guard_h) {
            auto [T_land, st_land] = land_fraction(y, k1, T, h, [&](const Vec4& yy) {
                return min_endpoint_h(pot, s, yy) < opts.guard_h;
            });
            out.trajectory.samples.push_back(FlowState{T_land, make_config(s, st_land.y), st_land.k_last});
            out.trajectory.cause = StopCause::Event;
            out.event = detect_transition(out.trajectory, pot, opts);  // throws SingularityError if unclassifiable
            return out;
        }

        // interior density-sign monitor: h developing a zero inside the
        // support is a merge seen from the low-s side
        double monitor_new = support_sign_h_min(pot, s, y_new);
        if (monitor_prev > 0.0 && monitor_new < 0.0) {
            auto [T_land, st_land] = land_fraction(y, k1, T, h, [&](const Vec4& yy) {
                return support_sign_h_min(pot, s, yy) < 0.0;
            });
            out.trajectory.samples.push_back(FlowState{T_land, make_config(s, st_land.y), st_land.k_last});
            out.trajectory.cause = StopCause::Event;
            out.event = detect_transition(out.trajectory, pot, opts);
            return out;
        }

        // an accepted step that no longer advances T is a stall on a
        // drift-displaced singularity: classify from the tail
        if (std::fabs(h) < 1e-13 * std::max(1.0, std::fabs(T)) &&
            min_pair_distance(y_new, n) < 100.0 * opts.guard_gap) {
            out.trajectory.samples.push_back(FlowState{T + h, make_config(s, y_new), k_new});
            out.trajectory.cause = StopCause::Event;
            out.event = detect_transition(out.trajectory, pot, opts);
            return out;
        }

        T = T_new;
        y = y_new;
        k1 = k_new;
        monitor_prev = monitor_new;
        out.trajectory.samples.push_back(FlowState{T, make_config(s, y), k1});

        if (T == T_target || std::fabs(T - T_target) <= 1e-15 * std::max(1.0, std::fabs(T_target))) {
            out.trajectory.cause = StopCause::RangeEnd;
            return out;
        }
        h = dir * std::min(hmax, std::fabs(h) * std::min(5.0, 0.9 * std::pow(std::max(st.err, 1e-10), -0.2)));
    }
    throw IntegrationError(T, "integrate: step budget exhausted");
}

namespace {

double merge_gap_amplitude_theory(const Potential& pot, const EndpointConfig& reduced, double beta) {
    // h2'(beta) = h1''(beta)/2 through h2 = h1/(z - beta); the fast pair obeys
    // gap = a sqrt(t) with a^2 = -32/(h1''(beta) prod_outer (beta - b_j)),
    // which reduces to 16/(4 - beta^2) in the (-2, 2) normalization
    Polynomial h1 = h_polynomial(pot, reduced);
    double h1pp = h1.derivative().derivative()(beta);
    double prod = 1.0;
    for (int i = 0; i < reduced.n_endpoints(); ++i) prod *= beta - reduced.beta[static_cast<std::size_t>(i)];
    double a2 = -32.0 / (h1pp * prod);
    if (!(a2 > 0.0)) throw NumericError("merge amplitude: degenerate h at the coalescence point");
    return std::sqrt(a2);
}

}  // namespace

TransitionEvent detect_transition(const Trajectory& traj, const Potential& pot, const IntegrateOptions& opts) {
    if (traj.samples.size() < 2) throw DomainError("detect_transition: trajectory too short");
    const FlowState& last = traj.samples.back();
    const int s = traj.s;
    const int n = 2 * s;

    int i0 = 0;
    double dmin = min_pair_distance(last.config.beta, n, &i0);
    double dir = (last.T >= traj.samples.front().T) ? 1.0 : -1.0;

    if (dmin > 100.0 * opts.guard_gap) {
        // no coalescence: either h vanished at an endpoint (singular
        // density) or h crossed zero inside the support (merge seen from
        // the low-s side)
        double arg = 0.0;
        double interior = support_sign_h_min(pot, s, last.config.beta, &arg);
        if (interior < 100.0 * opts.guard_h) {
            TransitionEvent ev;
            ev.kind = TransitionKind::Merge;
            ev.t_c = last.T;
            // refine the double zero of h through the simple zero of h'
            Polynomial hp = h_polynomial(pot, last.config).derivative();
            Polynomial hpp = hp.derivative();
            double z = arg;
            for (int it = 0; it < 60; ++it) {
                double step = hp(z) / hpp(z);
                z -= step;
                if (std::fabs(step) < 1e-14 * std::max(1.0, std::fabs(z))) break;
            }
            ev.beta = z;
            ev.config_reduced = last.config;
            int l = 1;
            std::vector<double> deg;
            for (int i = 0; i < n; ++i) {
                double bi = last.config.beta[static_cast<std::size_t>(i)];
                if (bi < z) deg.push_back(bi);
            }
            l = static_cast<int>(deg.size()) + 1;
            deg.push_back(z);
            deg.push_back(z);
            for (int i = 0; i < n; ++i) {
                double bi = last.config.beta[static_cast<std::size_t>(i)];
                if (bi >= z) deg.push_back(bi);
            }
            ev.pair = l;
            ev.config_degenerate = EndpointConfig::from_span(deg);
            ev.pair_amplitude_theory = merge_gap_amplitude_theory(pot, ev.config_reduced, ev.beta);
            ev.pair_amplitude = ev.pair_amplitude_theory;
            return ev;
        }
        throw SingularityError(SingularityError::Factor::HVanishing, 0,
                               "detect_transition: singular density without pair collapse");
    }

    const bool is_gap_pair = (i0 % 2 == 1);

    if (is_gap_pair) {
        // merging of two cuts; refine T_c by the square-root law:
        // gap^2 is linear in T near the merge.  Walking backwards, demand
        // strictly growing gaps so that samples from a terminal stall
        // cannot poison the fit.
        std::vector<std::pair<double, double>> pts;  // (T, gap^2)
        double g_prev = 0.0;
        for (std::size_t i = traj.samples.size(); i-- > 0 && pts.size() < 12;) {
            const auto& st = traj.samples[i];
            double g = st.config.beta[static_cast<std::size_t>(i0 + 1)] - st.config.beta[static_cast<std::size_t>(i0)];
            if (g > 1e-2) break;
            if (!pts.empty() && g < g_prev * 1.02) continue;
            pts.emplace_back(st.T, g * g);
            g_prev = g;
        }
        // center the abscissa: the fitted T window is ~1e-9 wide around an
        // O(1) temperature, far below the conditioning of raw normal
        // equations
        double t_c = last.T;
        double amp = 0.0;
        if (pts.size() >= 2) {
            double t_ref = last.T;
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (auto [x, yv] : pts) {
                double xc = x - t_ref;
                sx += xc;
                sy += yv;
                sxx += xc * xc;
                sxy += xc * yv;
            }
            double m = static_cast<double>(pts.size());
            double q = (m * sxy - sx * sy) / (m * sxx - sx * sx);
            double p = (sy - q * sx) / m;
            if (q != 0.0) t_c = t_ref - p / q;
            amp = std::sqrt(std::fabs(q));
        }

        TransitionEvent ev;
        ev.kind = TransitionKind::Merge;
        ev.t_c = t_c;
        ev.pair = i0 + 1;
        ev.pair_amplitude = amp;

        double dt = t_c - last.T;
        auto lo = static_cast<std::size_t>(i0);
        ev.beta = 0.5 * (last.config.beta[lo] + last.config.beta[lo + 1]);
        std::vector<double> survivors;
        for (int i = 0; i < n; ++i) {
            if (i == i0 || i == i0 + 1) continue;
            survivors.push_back(last.config.beta[static_cast<std::size_t>(i)] +
                                last.velocity[static_cast<std::size_t>(i)] * dt);
        }
        ev.config_reduced = EndpointConfig::from_span(survivors);
        std::vector<double> deg;
        for (int i = 0; i < n; ++i) {
            if (i == i0 || i == i0 + 1)
                deg.push_back(ev.beta);
            else
                deg.push_back(last.config.beta[static_cast<std::size_t>(i)] +
                              last.velocity[static_cast<std::size_t>(i)] * dt);
        }
        ev.config_degenerate = EndpointConfig::from_span(deg);
        ev.pair_amplitude_theory = merge_gap_amplitude_theory(pot, ev.config_reduced, ev.beta);
        return ev;
    }

    // cut collapse
    if (dir > 0.0)
        throw SingularityError(SingularityError::Factor::CutCollapse, i0,
                               "detect_transition: cut collapse while heating is not a classified process");

    TransitionEvent ev;
    ev.kind = TransitionKind::Birth;
    ev.pair = i0 + 1;
    auto lo = static_cast<std::size_t>(i0);
    double u = last.config.beta[lo + 1] - last.config.beta[lo];
    ev.beta = 0.5 * (last.config.beta[lo] + last.config.beta[lo + 1]);

    std::vector<double> survivors;
    for (int i = 0; i < n; ++i) {
        if (i == i0 || i == i0 + 1) continue;
        survivors.push_back(last.config.beta[static_cast<std::size_t>(i)]);
    }
    // gamma from its closed form, h evaluated on the (still two-cut) tail
    double d1 = 0.0, d2 = 0.0;  // far and near survivor distances
    {
        double a = std::fabs(ev.beta - survivors[0]);
        double b = std::fabs(ev.beta - survivors[1]);
        d1 = std::max(a, b);
        d2 = std::min(a, b);
    }
    Polynomial h2 = h_polynomial(pot, last.config);
    double theta = std::atanh(std::sqrt(d2 / d1));
    ev.gamma = 8.0 * theta / (h2(ev.beta) * std::sqrt(d1 * d2));

    // T~_c from the width law u^2 (2|log u| + 1) = 8 gamma (T - T~_c)
    double delta = u * u * (2.0 * std::fabs(std::log(u)) + 1.0) / (8.0 * ev.gamma);
    ev.t_c = last.T - delta;

    double dt = ev.t_c - last.T;
    for (std::size_t i = 0; i < survivors.size(); ++i) {
        int orig = (static_cast<int>(i) < i0) ? static_cast<int>(i) : static_cast<int>(i) + 2;
        survivors[i] += last.velocity[static_cast<std::size_t>(orig)] * dt;
    }
    ev.config_reduced = EndpointConfig::from_span(survivors);
    std::vector<double> deg;
    for (int i = 0; i < n; ++i) {
        if (i == i0 || i == i0 + 1) {
            deg.push_back(ev.beta);
        } else {
            int si = (i < i0) ? i : i - 2;
            deg.push_back(survivors[static_cast<std::size_t>(si)]);
        }
    }
    ev.config_degenerate = EndpointConfig::from_span(deg);
    return ev;
}

namespace {

// damped Newton sweeps on two components of the hodograph residuals,
// moving only the two named endpoints
void corrector(const Potential& pot, double T, int s, Vec4& y, int ia, int ib, int sweeps, double damping,
               double tol) {
    auto res_pair = [&](const Vec4& yy) {
        auto r = hodograph_residual(pot, T, make_config(s, yy));
        return std::pair{r[static_cast<std::size_t>(ia)], r[static_cast<std::size_t>(ib)]};
    };
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        auto [ra, rb] = res_pair(y);
        if (std::max(std::fabs(ra), std::fabs(rb)) < tol) return;
        double eps_a = 1e-7 * std::max(1.0, std::fabs(y[static_cast<std::size_t>(ia)]));
        double eps_b = 1e-7 * std::max(1.0, std::fabs(y[static_cast<std::size_t>(ib)]));
        Vec4 ya = y, yb = y;
        ya[static_cast<std::size_t>(ia)] += eps_a;
        yb[static_cast<std::size_t>(ib)] += eps_b;
        auto [ra_a, rb_a] = res_pair(ya);
        auto [ra_b, rb_b] = res_pair(yb);
        double j11 = (ra_a - ra) / eps_a, j12 = (ra_b - ra) / eps_b;
        double j21 = (rb_a - rb) / eps_a, j22 = (rb_b - rb) / eps_b;
        double det = j11 * j22 - j12 * j21;
        if (det == 0.0) return;
        double da = (ra * j22 - rb * j12) / det;
        double db = (rb * j11 - ra * j21) / det;
        Vec4 trial = y;
        double lambda = damping;
        for (int halve = 0; halve < 8; ++halve) {
            trial = y;
            trial[static_cast<std::size_t>(ia)] -= lambda * da;
            trial[static_cast<std::size_t>(ib)] -= lambda * db;
            bool ordered = true;
            for (int i = 0; i + 1 < 2 * s; ++i)
                ordered = ordered && trial[static_cast<std::size_t>(i)] < trial[static_cast<std::size_t>(i + 1)];
            if (ordered) break;
            lambda *= 0.5;
        }
        y = trial;
    }
}

// alternate damped pair sweeps until the whole residual vector is at
// integrator accuracy; the asymptotic launch only needs to land in the
// Newton basin
void polish_all(const Potential& pot, double T, int s, Vec4& y) {
    for (int round = 0; round < 16; ++round) {
        if (max_abs_residual(pot, T, s, y) < 1e-12) return;
        corrector(pot, T, s, y, 0, 1, 2, 1.0, 1e-13);
        if (s == 2) corrector(pot, T, s, y, 2, 3, 2, 1.0, 1e-13);
    }
}

}  // namespace

FlowState critical_launch(const Potential& pot, const TransitionEvent& event, LaunchSide side, double t,
                          const LaunchOptions& opts) {
    double t_max = opts.t_max_frac * std::max(1.0, std::fabs(event.t_c));
    if (!(t > 0.0) || t > t_max) throw DomainError("critical_launch: offset outside (0, t_max]");

    const EndpointConfig& red = event.config_reduced;
    Vec4 vred = endpoint_velocity(pot, red);
    const int l = event.pair;  // 1-based left index of the coalescing pair

    FlowState out;
    if (event.kind == TransitionKind::Merge) {
        if (side == LaunchSide::Above) {
            // s-1 side: survivors move with their own velocities
            std::vector<double> y;
            for (int i = 0; i < red.n_endpoints(); ++i)
                y.push_back(red.beta[static_cast<std::size_t>(i)] + vred[static_cast<std::size_t>(i)] * t);
            out.T = event.t_c + t;
            Vec4 yy{};
            std::copy(y.begin(), y.end(), yy.begin());
            corrector(pot, out.T, red.s, yy, 0, 1, 12, 1.0, 1e-13);
            polish_all(pot, out.T, red.s, yy);
            out.config = make_config(red.s, yy);
        } else {
            // s side: fast pair opens like (amplitude/2) sqrt(t)
            double d = 0.5 * event.pair_amplitude_theory * std::sqrt(t);
            std::vector<double> y;
            for (int i = 0; i < red.n_endpoints(); ++i) {
                if (i == l - 1) {
                    y.push_back(event.beta - d);
                    y.push_back(event.beta + d);
                }
                y.push_back(red.beta[static_cast<std::size_t>(i)] - vred[static_cast<std::size_t>(i)] * t);
            }
            if (l - 1 == red.n_endpoints()) {
                y.push_back(event.beta - d);
                y.push_back(event.beta + d);
            }
            std::sort(y.begin(), y.end());
            out.T = event.t_c - t;
            Vec4 yy{};
            std::copy(y.begin(), y.end(), yy.begin());
            corrector(pot, out.T, red.s + 1, yy, l - 1, l, opts.corrector_sweeps, opts.corrector_damping, 1e-13);
            polish_all(pot, out.T, red.s + 1, yy);
            out.config = make_config(red.s + 1, yy);
        }
    } else {
        if (side == LaunchSide::Above) {
            // two-cut side: newborn pair follows the log-corrected square root
            if (t >= 1.0) throw DomainError("critical_launch: birth offset must be < 1");
            double d = std::sqrt(-2.0 * event.gamma * t / std::log(t));
            std::vector<double> y;
            for (int i = 0; i < red.n_endpoints(); ++i) {
                if (i == l - 1) {
                    y.push_back(event.beta - d);
                    y.push_back(event.beta + d);
                }
                y.push_back(red.beta[static_cast<std::size_t>(i)] + vred[static_cast<std::size_t>(i)] * t);
            }
            if (l - 1 == red.n_endpoints()) {
                y.push_back(event.beta - d);
                y.push_back(event.beta + d);
            }
            std::sort(y.begin(), y.end());
            out.T = event.t_c + t;
            Vec4 yy{};
            std::copy(y.begin(), y.end(), yy.begin());
            corrector(pot, out.T, red.s + 1, yy, l - 1, l, opts.corrector_sweeps, opts.corrector_damping, 1e-13);
            polish_all(pot, out.T, red.s + 1, yy);
            out.config = make_config(red.s + 1, yy);
        } else {
            std::vector<double> y;
            for (int i = 0; i < red.n_endpoints(); ++i)
                y.push_back(red.beta[static_cast<std::size_t>(i)] - vred[static_cast<std::size_t>(i)] * t);
            out.T = event.t_c - t;
            Vec4 yy{};
            std::copy(y.begin(), y.end(), yy.begin());
            corrector(pot, out.T, red.s, yy, 0, 1, 12, 1.0, 1e-13);
            polish_all(pot, out.T, red.s, yy);
            out.config = make_config(red.s, yy);
        }
    }
    out.velocity = endpoint_velocity(pot, out.config);
    return out;
}

FlowState seed_quartic_even(int s, double T) {
    Potential pot = Potential::quartic_even();
    FlowState st;
    st.T = T;
    if (s == 1) {
        if (!(T > 1.0)) throw DomainError("quartic-even one-cut seed requires T > 1");
        double b = (2.0 / std::sqrt(3.0)) * std::sqrt(1.0 + std::sqrt(1.0 + 3.0 * T));
        st.config = EndpointConfig::one_cut(-b, b);
    } else if (s == 2) {
        if (!(T > 0.0 && T < 1.0)) throw DomainError("quartic-even two-cut seed requires 0 < T < 1");
        double b1 = std::sqrt(2.0 * (1.0 + std::sqrt(T)));
        double b2 = std::sqrt(2.0 * (1.0 - std::sqrt(T)));
        st.config = EndpointConfig::two_cut(-b1, -b2, b2, b1);
    } else {
        throw DomainError("quartic-even seed: s must be 1 or 2");
    }
    st.velocity = endpoint_velocity(pot, st.config);
    return st;
}

FlowState seed_be_critical(double c) {
    if (!(std::fabs(c) < 1.0)) throw DomainError("be_critical seed requires |c| < 1");
    FlowState st;
    st.T = 1.0 + 4.0 * c * c;
    st.config = EndpointConfig::one_cut(-2.0, 2.0);
    st.velocity = endpoint_velocity(Potential::bleher_eynard(c), st.config);
    return st;
}

double be_minimum(double c) {
    if (!(std::fabs(c) < 1.0)) throw DomainError("be_minimum requires |c| < 1");
    if (std::fabs(c) < 1e-12)
        throw DomainError("be_minimum: c = 0 has two symmetric minima, no single collapse point");
    Potential pot = Potential::bleher_eynard(c);
    // V'(b) = b^3 - 4c b^2 + 2(2c^2-1) b + 8c = 0
    double a = -4.0 * c, b = 2.0 * (2.0 * c * c - 1.0), d = 8.0 * c;
    double p = b - a * a / 3.0;
    double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + d;
    double shift = -a / 3.0;
    double disc = 0.25 * q * q + p * p * p / 27.0;
    std::vector<double> roots;
    if (disc > 0.0) {
        double sq = std::sqrt(disc);
        roots.push_back(std::cbrt(-0.5 * q + sq) + std::cbrt(-0.5 * q - sq) + shift);
    } else {
        double m = 2.0 * std::sqrt(-p / 3.0);
        double phi = std::acos(std::clamp(3.0 * q / (p * m), -1.0, 1.0)) / 3.0;
        for (int k = 0; k < 3; ++k) roots.push_back(m * std::cos(phi - 2.0 * kPi * k / 3.0) + shift);
    }
    // polish and pick the global minimum of V
    double best = roots.front();
    double vbest = std::numeric_limits<double>::infinity();
    const Polynomial& vp = pot.prime();
    Polynomial vpp = vp.derivative();
    for (double r : roots) {
        for (int it = 0; it < 50; ++it) {
            double step = vp(r) / vpp(r);
            r -= step;
            if (std::fabs(step) < 1e-15 * std::max(1.0, std::fabs(r))) break;
        }
        if (vpp(r) <= 0.0) continue;  // maximum
        double v = pot(r);
        if (v < vbest) {
            vbest = v;
            best = r;
        }
    }
    return best;
}

const Trajectory& TraceResult::segment_containing(double T) const {
    for (const auto& seg : segments)
        if (seg.covers(T)) return seg;
    throw DomainError("no trajectory segment covers the requested temperature");
}

EndpointConfig TraceResult::config_at(const Potential& pot, double T) const {
    for (const auto& seg : segments)
        if (seg.covers(T)) return seg.config_at(pot, T);
    // the launches leave slivers of width ~launch offset around each
    // critical temperature; exactly there the reduced critical
    // configuration is the right limit (the densities of both phases agree
    // at the transition), and just off it the nearest segment end is
    // within O(offset) of the requested temperature
    double scl = std::max(1.0, std::fabs(T));
    for (const auto& ev : events)
        if (std::fabs(T - ev.t_c) <= 1e-9 * scl) return ev.config_reduced;
    const Trajectory* best = nullptr;
    double dist = std::numeric_limits<double>::infinity();
    double clamp = 0.0;
    for (const auto& seg : segments) {
        double lo = std::min(seg.t_front(), seg.t_back());
        double hi = std::max(seg.t_front(), seg.t_back());
        double c = std::clamp(T, lo, hi);
        double d = std::fabs(T - c);
        if (d < dist) {
            dist = d;
            best = &seg;
            clamp = c;
        }
    }
    if (best && dist <= 1e-5 * scl) return best->config_at(pot, clamp);
    throw DomainError("no trajectory segment covers the requested temperature");
}

namespace {

// Merge-critical seeds (h touching zero inside the support) start exactly
// on a transition; synthesize the event so the low-T side can be launched.
std::optional<TransitionEvent> seed_critical_event(const Potential& pot, const FlowState& seed) {
    double arg = 0.0;
    double m = support_sign_h_min(pot, seed.config.s, seed.config.beta, &arg);
    double scale = 1.0;
    if (m > 1e-7 * scale) return std::nullopt;
    TransitionEvent ev;
    ev.kind = TransitionKind::Merge;
    ev.t_c = seed.T;
    Polynomial hp = h_polynomial(pot, seed.config).derivative();
    Polynomial hpp = hp.derivative();
    double z = arg;
    for (int it = 0; it < 60; ++it) {
        double step = hp(z) / hpp(z);
        z -= step;
        if (std::fabs(step) < 1e-14 * std::max(1.0, std::fabs(z))) break;
    }
    ev.beta = z;
    ev.config_reduced = seed.config;
    std::vector<double> deg;
    int count_below = 0;
    for (int i = 0; i < seed.config.n_endpoints(); ++i)
        if (seed.config.beta[static_cast<std::size_t>(i)] < z) ++count_below;
    ev.pair = count_below + 1;
    for (int i = 0; i < seed.config.n_endpoints(); ++i) {
        if (i == count_below) {
            deg.push_back(z);
            deg.push_back(z);
        }
        deg.push_back(seed.config.beta[static_cast<std::size_t>(i)]);
    }
    if (count_below == seed.config.n_endpoints()) {
        deg.push_back(z);
        deg.push_back(z);
    }
    ev.config_degenerate = EndpointConfig::from_span(deg);
    ev.pair_amplitude_theory = merge_gap_amplitude_theory(pot, ev.config_reduced, ev.beta);
    ev.pair_amplitude = ev.pair_amplitude_theory;
    return ev;
}

}  // namespace

TraceResult trace(const Potential& pot, const FlowState& seed, double t_min, double t_max,
                  const TraceOptions& opts) {
    if (!(t_min > 0.0) || !(t_min < t_max)) throw DomainError("trace: need 0 < t_min < t_max");
    TraceResult out;

    auto run_leg = [&](FlowState state, double T_stop) {
        for (int hop = 0; hop < 8; ++hop) {
            if (std::fabs(state.T - T_stop) < 1e-12) break;
            double dir = (T_stop > state.T) ? 1.0 : -1.0;
            IntegrateOutcome res = integrate(pot, state, T_stop, opts.integrate);
            out.segments.push_back(res.trajectory);
            if (!res.event) break;
            out.events.push_back(*res.event);
            double t_off = opts.launch_offset_frac * std::max(1.0, std::fabs(res.event->t_c));
            LaunchSide side = (dir < 0.0) ? LaunchSide::Below : LaunchSide::Above;
            state = critical_launch(pot, *res.event, side, t_off, opts.launch);
        }
    };

    auto seed_event = seed_critical_event(pot, seed);

    if (t_max > seed.T + 1e-12) {
        // upward continuation; a merge-critical seed flows upward regularly
        run_leg(seed, t_max);
    }
    if (t_min < seed.T - 1e-12) {
        if (seed_event) {
            out.events.push_back(*seed_event);
            double t_off = opts.launch_offset_frac * std::max(1.0, std::fabs(seed_event->t_c));
            FlowState below = critical_launch(pot, *seed_event, LaunchSide::Below, t_off, opts.launch);
            run_leg(below, t_min);
        } else {
            run_leg(seed, t_min);
        }
    }

    std::sort(out.segments.begin(), out.segments.end(), [](const Trajectory& a, const Trajectory& b) {
        return std::min(a.t_front(), a.t_back()) < std::min(b.t_front(), b.t_back());
    });
    std::sort(out.events.begin(), out.events.end(),
              [](const TransitionEvent& a, const TransitionEvent& b) { return a.t_c < b.t_c; });
    return out;
}

double birth_from_margin(const Potential& pot, const Trajectory& one_cut, double T_hint) {
    if (one_cut.s != 1) throw DomainError("birth_from_margin: one-cut trajectory required");
    // the exterior margin of the one-cut configuration vanishes at the
    // birth temperature; quadratic extrapolation of its dip value to zero
    auto margin_at = [&](double T) {
        EndpointConfig cfg = one_cut.config_at(pot, T);
        double left = exterior_dip_margin(pot, cfg, false);
        double right = exterior_dip_margin(pot, cfg, true);
        return std::min(left, right);
    };
    double d1 = 1e-3, d2 = 2e-3, d3 = 4e-3;
    double m1 = margin_at(T_hint - d1);
    double m2 = margin_at(T_hint - d2);
    double m3 = margin_at(T_hint - d3);
    // m(T_hint - d) = a + b d + c d^2; root of the quadratic nearest d = 0
    double den12 = d2 - d1, den13 = d3 - d1, den23 = d3 - d2;
    double c = ((m3 - m1) / den13 - (m2 - m1) / den12) / den23;
    double b = (m2 - m1) / den12 - c * (d1 + d2);
    double a = m1 - b * d1 - c * d1 * d1;
    // the margin grows with the distance d below the hint, so the quadratic
    // in d has a root near d = T_hint - T~_c
    double root;
    double disc = b * b - 4.0 * a * c;
    if (c != 0.0 && disc >= 0.0) {
        double r1 = (-b + std::sqrt(disc)) / (2.0 * c);
        double r2 = (-b - std::sqrt(disc)) / (2.0 * c);
        root = (std::fabs(r1) < std::fabs(r2)) ? r1 : r2;
    } else {
        root = -a / b;
    }
    return T_hint - root;
}

}  // namespace cutflow
