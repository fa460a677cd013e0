#include "cutflow/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cutflow/errors.hpp"
#include "cutflow/quadrature.hpp"

namespace cutflow {

namespace {
constexpr double kPi = std::numbers::pi;
}

Polynomial h_polynomial(const Potential& pot, const EndpointConfig& config) {
    return polynomial_part(pot.prime(), config.view());
}

double w1_exterior(const EndpointConfig& config, double x) {
    // region i = number of cuts strictly left of x; sign (-1)^{s-i} matches
    // the s=1 and s=2 branch tables and w1 ~ z^s at +infinity
    int region = 0;
    double prod = 1.0;
    for (int i = 0; i < config.n_endpoints(); ++i) {
        double d = x - config.beta[static_cast<std::size_t>(i)];
        prod *= std::fabs(d);
        if (d > 0.0 && i % 2 == 1) ++region;
    }
    int sign = ((config.s - region) % 2 == 0) ? 1 : -1;
    return sign * std::sqrt(prod);
}

double w1_plus_imag_coeff(const EndpointConfig& config, double x) {
    int j = config.cut_of(x);
    if (j < 0) throw DomainError("w1_plus: x not inside the support");
    double prod = 1.0;
    for (int i = 0; i < config.n_endpoints(); ++i) prod *= std::fabs(x - config.beta[static_cast<std::size_t>(i)]);
    int sign = ((config.s - 1 - j) % 2 == 0) ? 1 : -1;
    return sign * std::sqrt(prod);
}

double density_at(const Potential& pot, double T, const EndpointConfig& config, double x) {
    if (T <= 0.0) throw DomainError("density_at: T must be positive");
    int j = config.cut_of(x);
    if (j < 0 || x == config.cut_lo(j) || x == config.cut_hi(j))
        throw DomainError("density_at: x not strictly inside a cut");
    Polynomial h = h_polynomial(pot, config);
    // rho = h w1+ / (2 pi i T); w1+ = i * imag_coeff
    return h(x) * w1_plus_imag_coeff(config, x) / (2.0 * kPi * T);
}

namespace {

// sqrt of |prod over endpoints other than the active cut's own pair|
double sqrt_other_factors(const EndpointConfig& config, int cut, double x) {
    double prod = 1.0;
    for (int i = 0; i < config.n_endpoints(); ++i) {
        if (i == 2 * cut || i == 2 * cut + 1) continue;
        prod *= std::fabs(x - config.beta[static_cast<std::size_t>(i)]);
    }
    return std::sqrt(prod);
}

}  // namespace

double density_norm(const Potential& pot, double T, const EndpointConfig& config) {
    if (T <= 0.0) throw DomainError("density_norm: T must be positive");
    Polynomial h = h_polynomial(pot, config);
    double total = 0.0;
    for (int j = 0; j < config.s; ++j) {
        int sign = ((config.s - 1 - j) % 2 == 0) ? 1 : -1;
        auto f = [&](double x) { return h(x) * sign * sqrt_other_factors(config, j, x); };
        total += chebyshev_cut_integral_adaptive(f, config.cut_lo(j), config.cut_hi(j), 1e-12) / (2.0 * kPi * T);
    }
    return total;
}

std::vector<double> hodograph_residual(const Potential& pot, double T, const EndpointConfig& config) {
    if (T <= 0.0) throw DomainError("hodograph_residual: T must be positive");
    std::vector<double> res(static_cast<std::size_t>(config.n_endpoints()), 0.0);
    for (int k = 0; k <= pot.degree(); ++k) {
        double tk = (k == 0) ? -T : pot.coeff(k);
        if (tk == 0.0) continue;
        Polynomial pk = p_k(k, config);
        for (int i = 0; i < config.n_endpoints(); ++i)
            res[static_cast<std::size_t>(i)] += tk * pk(config.beta[static_cast<std::size_t>(i)]);
    }
    return res;
}

namespace {

// Variational-inequality margins, scaled by the local (distance)^{3/2}
// weight that the running integral of h w1 carries at a support edge: the
// scaled margin stays bounded away from zero for regular configurations
// and dips to zero exactly where an inequality saturates.
struct MarginScan {
    double margin;
    double argmin;
};

// One-sided cumulative scan from a support edge, x = edge + dir u^2 with
// u in (0, umax]; (x-edge)^{3/2} = u^3 is the scaling weight.  The running
// integral is taken in the direction away from the support, which makes it
// positive exactly when the inequality holds.
MarginScan edge_margin_scan(const Polynomial& h, const EndpointConfig& config, double edge, double dir,
                            int region, double umax, int n_samples, double u_cap) {
    int sign = ((config.s - region) % 2 == 0) ? 1 : -1;
    auto g = [&](double u) {
        double x = edge + dir * u * u;
        double prod = 1.0;
        for (int i = 0; i < config.n_endpoints(); ++i) prod *= std::fabs(x - config.beta[static_cast<std::size_t>(i)]);
        prod /= u * u;  // drop the edge's own |x-edge| = u^2 factor
        return h(x) * sign * u * std::sqrt(prod) * 2.0 * u * dir;
    };
    std::vector<double> us(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        double th = (i + 0.5) * kPi / (2.0 * n_samples);  // cluster near the edge
        us[static_cast<std::size_t>(i)] = umax * std::sin(th);
    }
    auto cum = cumulative_integral(g, 0.0, us);
    // cum is the oriented integral from the edge outward; for each of
    // (des1)-(des3) that orientation makes the satisfied inequality read
    // cum >= 0
    MarginScan scan{std::numeric_limits<double>::infinity(), edge + dir * umax * umax};
    for (int i = 0; i < n_samples; ++i) {
        double u = us[static_cast<std::size_t>(i)];
        if (u > u_cap) break;
        double m = cum[static_cast<std::size_t>(i)] / (u * u * u);
        if (m < scan.margin) {
            scan.margin = m;
            scan.argmin = edge + dir * u * u;
        }
    }
    return scan;
}

MarginScan exterior_margin(const Polynomial& h, const EndpointConfig& config, bool right, double reach,
                           int n_samples) {
    double edge = right ? config.beta[static_cast<std::size_t>(2 * config.s - 1)] : config.beta[0];
    return edge_margin_scan(h, config, edge, right ? 1.0 : -1.0, right ? config.s : 0, std::sqrt(reach),
                            n_samples, std::numeric_limits<double>::infinity());
}

// Gap inequality, scanned from both ends toward the middle.  The far half
// is checked against its own edge so that the small closure defect of the
// full-gap integral (of the order of the hodograph residual) never gets
// divided by a vanishing weight.
MarginScan gap_margin(const Polynomial& h, const EndpointConfig& config, int j, int n_samples) {
    double a = config.cut_hi(j), b = config.cut_lo(j + 1);
    double half = std::sqrt(0.5 * (b - a));
    auto left = edge_margin_scan(h, config, a, 1.0, j + 1, half, n_samples / 2, half);
    auto rightscan = edge_margin_scan(h, config, b, -1.0, j + 1, half, n_samples / 2, half);
    return (left.margin <= rightscan.margin) ? left : rightscan;
}

}  // namespace

AdmissibilityReport admissibility(const Potential& pot, double T, const EndpointConfig& config,
                                  const AdmissibilityOptions& opts) {
    AdmissibilityReport rep;
    auto res = hodograph_residual(pot, T, config);
    for (double r : res) rep.residual_max = std::max(rep.residual_max, std::fabs(r));
    if (rep.residual_max > opts.residual_tol) {
        rep.verdict = AdmissibilityReport::Verdict::Inadmissible;
        return rep;
    }

    Polynomial h = h_polynomial(pot, config);

    // density-sign and h on the closed support, Chebyshev-sampled, with the
    // sampled minimum polished to the interior extremum of h so a quadratic
    // touch is resolved below the sample spacing.  The density margin drops
    // the cut's own square-root edge factor, so it vanishes exactly where h
    // does instead of at every cut edge.
    rep.rho_min = std::numeric_limits<double>::infinity();
    rep.h_abs_min = std::numeric_limits<double>::infinity();
    Polynomial hp = h.derivative();
    Polynomial hpp = hp.derivative();
    for (int j = 0; j < config.s; ++j) {
        double a = config.cut_lo(j), b = config.cut_hi(j);
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        int sign = ((config.s - 1 - j) % 2 == 0) ? 1 : -1;
        double cut_arg = mid, cut_min = std::numeric_limits<double>::infinity();
        for (int i = 0; i < opts.samples_per_region; ++i) {
            double th = (i + 0.5) * kPi / opts.samples_per_region;
            double x = mid + half * std::cos(th);
            double hx = h(x);
            double rho_margin = hx * sign * sqrt_other_factors(config, j, x) / (2.0 * kPi * T);
            if (rho_margin < cut_min) {
                cut_min = rho_margin;
                cut_arg = x;
            }
            rep.h_abs_min = std::min(rep.h_abs_min, std::fabs(hx));
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
            cut_min = std::min(cut_min, h(z) * sign * sqrt_other_factors(config, j, z) / (2.0 * kPi * T));
            rep.h_abs_min = std::min(rep.h_abs_min, std::fabs(h(z)));
        }
        rep.rho_min = std::min(rep.rho_min, cut_min);
        rep.h_abs_min = std::min({rep.h_abs_min, std::fabs(h(a)), std::fabs(h(b))});
    }

    // variational inequalities off the support
    rep.exterior.push_back([&] {
        auto scan = exterior_margin(h, config, false, opts.exterior_reach, opts.samples_per_region);
        return RegionCheck{"left", config.beta[0] - opts.exterior_reach, config.beta[0], scan.margin, scan.argmin,
                           scan.margin > opts.singular_tol};
    }());
    for (int j = 0; j + 1 < config.s; ++j) {
        auto scan = gap_margin(h, config, j, opts.samples_per_region);
        rep.exterior.push_back(RegionCheck{"gap" + std::to_string(j + 1), config.cut_hi(j), config.cut_lo(j + 1),
                                           scan.margin, scan.argmin, scan.margin > opts.singular_tol});
    }
    rep.exterior.push_back([&] {
        double edge = config.beta[static_cast<std::size_t>(2 * config.s - 1)];
        auto scan = exterior_margin(h, config, true, opts.exterior_reach, opts.samples_per_region);
        return RegionCheck{"right", edge, edge + opts.exterior_reach, scan.margin, scan.argmin,
                           scan.margin > opts.singular_tol};
    }());

    rep.density_positive = rep.rho_min > opts.singular_tol;
    rep.h_nonvanishing_on_support = rep.h_abs_min > opts.singular_tol;

    double worst = std::min(rep.rho_min, rep.h_abs_min);
    for (const auto& region : rep.exterior) worst = std::min(worst, region.margin);
    if (worst < -opts.singular_tol)
        rep.verdict = AdmissibilityReport::Verdict::Inadmissible;
    else if (worst <= opts.singular_tol)
        rep.verdict = AdmissibilityReport::Verdict::Singular;
    else
        rep.verdict = AdmissibilityReport::Verdict::Regular;
    return rep;
}

double exterior_dip_margin(const Potential& pot, const EndpointConfig& config, bool right, double reach) {
    Polynomial h = h_polynomial(pot, config);
    double edge = right ? config.beta[static_cast<std::size_t>(2 * config.s - 1)] : config.beta[0];
    double dir = right ? 1.0 : -1.0;
    int region = right ? config.s : 0;
    int sign = ((config.s - region) % 2 == 0) ? 1 : -1;
    auto integrand = [&](double u) {
        double x = edge + dir * u * u;
        double prod = 1.0;
        for (int i = 0; i < config.n_endpoints(); ++i) prod *= std::fabs(x - config.beta[static_cast<std::size_t>(i)]);
        prod /= u * u;
        return h(x) * sign * u * std::sqrt(prod) * 2.0 * u * dir;
    };
    double umax = std::sqrt(reach);
    const int panels = 256;
    std::vector<double> us(panels);
    for (int i = 0; i < panels; ++i) us[static_cast<std::size_t>(i)] = umax * (i + 1.0) / panels;
    auto cum = cumulative_integral(integrand, 0.0, us);
    // bracket the minimizer of cum(u)/u^3 on the grid, then golden-section
    int best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (int i = 0; i < panels; ++i) {
        double u = us[static_cast<std::size_t>(i)];
        double v = cum[static_cast<std::size_t>(i)] / (u * u * u);
        if (v < best_v) {
            best_v = v;
            best = i;
        }
    }
    double lo = us[static_cast<std::size_t>(std::max(0, best - 1))];
    double hi = us[static_cast<std::size_t>(std::min(panels - 1, best + 1))];
    double base_u = (best > 0) ? us[static_cast<std::size_t>(best - 1)] : 0.0;
    double base_c = (best > 0) ? cum[static_cast<std::size_t>(best - 1)] : 0.0;
    auto value = [&](double u) {
        std::vector<double> pt{u};
        double c = base_c + cumulative_integral(integrand, base_u, pt)[0];
        return c / (u * u * u);
    };
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
    double f1 = value(x1), f2 = value(x2);
    for (int it = 0; it < 60 && b - a > 1e-11; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - golden * (b - a);
            f1 = value(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + golden * (b - a);
            f2 = value(x2);
        }
    }
    return std::min(f1, f2);
}

DensityProfile density_profile(const Potential& pot, double T, const EndpointConfig& config, int samples_per_cut) {
    DensityProfile prof;
    prof.config = config;
    prof.T = T;
    Polynomial h = h_polynomial(pot, config);
    for (int j = 0; j < config.s; ++j) {
        double a = config.cut_lo(j), b = config.cut_hi(j);
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        int sign = ((config.s - 1 - j) % 2 == 0) ? 1 : -1;
        std::vector<std::pair<double, double>> table;
        table.reserve(static_cast<std::size_t>(samples_per_cut) + 2);
        table.emplace_back(a, 0.0);
        for (int i = samples_per_cut - 1; i >= 0; --i) {  // ascending x
            double th = (i + 0.5) * kPi / samples_per_cut;
            double x = mid + half * std::cos(th);
            double rho = h(x) * sign * std::sqrt((x - a) * (b - x)) * sqrt_other_factors(config, j, x) /
                         (2.0 * kPi * T);
            table.emplace_back(x, rho);
        }
        table.emplace_back(b, 0.0);
        prof.samples.push_back(std::move(table));
    }
    prof.norm = density_norm(pot, T, config);
    return prof;
}

}  // namespace cutflow
