#include "cutflow/elliptic.hpp"

#include <algorithm>
#include <cmath>

#include "cutflow/errors.hpp"

namespace cutflow {

namespace detail {

// Carlson symmetric forms by the duplication theorem (Carlson 1979/1994).
// Each iteration quarters the deviation; the series tails are O(eps^6), so
// eps < 1e-3 leaves ~1e-18, below double rounding.

double carlson_rf(double x, double y, double z) {
    if (x < 0.0 || y < 0.0 || z < 0.0 || x + y <= 0.0 || y + z <= 0.0 || z + x <= 0.0)
        throw DomainError("carlson_rf: arguments outside domain");
    for (int it = 0; it < 200; ++it) {
        double mu = (x + y + z) / 3.0;
        double dx = (mu - x) / mu, dy = (mu - y) / mu, dz = (mu - z) / mu;
        if (std::max({std::fabs(dx), std::fabs(dy), std::fabs(dz)}) < 1e-3) {
            double e2 = dx * dy - dz * dz;
            double e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(mu);
        }
        double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        double lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
    }
    throw NumericError("carlson_rf: no convergence");
}

double carlson_rd(double x, double y, double z) {
    if (x < 0.0 || y < 0.0 || x + y <= 0.0 || z <= 0.0)
        throw DomainError("carlson_rd: arguments outside domain");
    double sum = 0.0, fac = 1.0;
    for (int it = 0; it < 200; ++it) {
        double mu = (x + y + 3.0 * z) / 5.0;
        double dx = (mu - x) / mu, dy = (mu - y) / mu, dz = (mu - z) / mu;
        if (std::max({std::fabs(dx), std::fabs(dy), std::fabs(dz)}) < 1e-3) {
            double ea = dx * dy;
            double eb = dz * dz;
            double ec = ea - eb;
            double ed = ea - 6.0 * eb;
            double ee = ed + ec + ec;
            double tail = 1.0 +
                          ed * (-3.0 / 14.0 + (9.0 / 88.0) * ed - (4.5 / 26.0) * dz * ee) +
                          dz * ((1.0 / 6.0) * ee + dz * (-(9.0 / 22.0) * ec + dz * (3.0 / 26.0) * ea));
            return 3.0 * sum + fac * tail / (mu * std::sqrt(mu));
        }
        double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        double lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lam));
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
    }
    throw NumericError("carlson_rd: no convergence");
}

// R_C(x,y) = R_F(x,y,y); y < 0 via the principal-value transformation.
static double carlson_rc(double x, double y) {
    if (x < 0.0 || y == 0.0) throw DomainError("carlson_rc: arguments outside domain");
    if (y < 0.0) return std::sqrt(x / (x - y)) * carlson_rc(x - y, -y);
    for (int it = 0; it < 200; ++it) {
        double mu = (x + 2.0 * y) / 3.0;
        double s = (y - x) / (3.0 * mu);
        if (std::fabs(s) < 1e-3) {
            return (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * (9.0 / 22.0))))) / std::sqrt(mu);
        }
        double lam = 2.0 * std::sqrt(x) * std::sqrt(y) + y;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
    }
    throw NumericError("carlson_rc: no convergence");
}

double carlson_rj(double x, double y, double z, double p) {
    if (x < 0.0 || y < 0.0 || z < 0.0 || x + y <= 0.0 || y + z <= 0.0 || z + x <= 0.0 || p == 0.0)
        throw DomainError("carlson_rj: arguments outside domain");
    if (p < 0.0) {
        // Carlson (1994) eq. 4.6: route a negative p through a positive one
        double lo = std::min({x, y, z});
        double hi = std::max({x, y, z});
        double mid = x + y + z - lo - hi;
        double a = 1.0 / (mid - p);
        double b = a * (hi - mid) * (mid - lo);
        double pt = mid + b;
        double rho = lo * hi / mid;
        double tau = p * pt / mid;
        return a * (b * carlson_rj(lo, mid, hi, pt) +
                    3.0 * (carlson_rc(rho, tau) - carlson_rf(lo, mid, hi)));
    }
    double sum = 0.0, fac = 1.0;
    for (int it = 0; it < 200; ++it) {
        double mu = (x + y + z + 2.0 * p) / 5.0;
        double dx = (mu - x) / mu, dy = (mu - y) / mu, dz = (mu - z) / mu, dp = (mu - p) / mu;
        if (std::max({std::fabs(dx), std::fabs(dy), std::fabs(dz), std::fabs(dp)}) < 1e-3) {
            double ea = dx * (dy + dz) + dy * dz;
            double eb = dx * dy * dz;
            double ec = dp * dp;
            double ed = ea - 3.0 * ec;
            double ee = eb + 2.0 * dp * (ea - ec);
            double tail = 1.0 + ed * (-3.0 / 14.0 + (9.0 / 88.0) * ed - (4.5 / 26.0) * ee) +
                          eb * (1.0 / 6.0 + dp * (-3.0 / 11.0 + dp * (3.0 / 26.0))) +
                          dp * ea * (1.0 / 3.0 - dp * (3.0 / 22.0)) - (1.0 / 3.0) * dp * ec;
            return 3.0 * sum + fac * tail / (mu * std::sqrt(mu));
        }
        double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        double lam = sx * (sy + sz) + sy * sz;
        double alpha = p * (sx + sy + sz) + sx * sy * sz;
        alpha *= alpha;
        double beta = p * (p + lam) * (p + lam);
        sum += fac * carlson_rc(alpha, beta);
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        p = 0.25 * (p + lam);
    }
    throw NumericError("carlson_rj: no convergence");
}

double complete_k_ext(double s) {
    if (s >= 1.0) throw DomainError("K(s): s must be < 1");
    return carlson_rf(0.0, 1.0 - s, 1.0);
}

double complete_pi_ext(double r, double s) {
    if (s >= 1.0 || r >= 1.0) throw DomainError("Pi(r,s): arguments must be < 1");
    double v = carlson_rf(0.0, 1.0 - s, 1.0);
    if (r != 0.0) v += (r / 3.0) * carlson_rj(0.0, 1.0 - s, 1.0, 1.0 - r);
    return v;
}

}  // namespace detail

double ellip_k(double s) {
    if (s < 0.0 || s >= 1.0) throw DomainError("ellip_k: s outside [0,1)");
    return detail::complete_k_ext(s);
}

double ellip_e(double s) {
    if (s < 0.0 || s > 1.0) throw DomainError("ellip_e: s outside [0,1]");
    if (s == 1.0) return 1.0;
    return detail::carlson_rf(0.0, 1.0 - s, 1.0) - (s / 3.0) * detail::carlson_rd(0.0, 1.0 - s, 1.0);
}

double ellip_pi(double r, double s) {
    if (s < 0.0 || s >= 1.0 || r < 0.0 || r >= 1.0) throw DomainError("ellip_pi: arguments outside [0,1)");
    return detail::complete_pi_ext(r, s);
}

double theta_ratio(double r, double s) {
    if (!(0.0 < r && r < s && s < 1.0)) throw DomainError("theta_ratio: need 0 < r < s < 1");
    return std::atanh(std::sqrt((std::sqrt(s) - std::sqrt(r)) / (1.0 - std::sqrt(r))));
}

double pi_over_k(double r, double s) {
    if (s < 0.0 || s >= 1.0 || r < 0.0 || r > s) throw DomainError("pi_over_k: need 0 <= r <= s < 1");
    return detail::pi_over_k_c(r, 1.0 - r, s, 1.0 - s);
}

namespace detail {

double pi_over_k_c(double r, double one_m_r, double s, double one_m_s) {
    if (one_m_s <= 0.0 || one_m_r <= 0.0 || r < 0.0) throw DomainError("pi_over_k: arguments outside domain");
    if (one_m_s < 1e-12) {
        // logarithmic regime: Pi ~ atanh(sqrt((s-r)/(1-r))) / (sqrt(s-r) sqrt(1-r)),
        // K ~ -log(1-s)/2;  s-r = (1-r) - (1-s) keeps the difference exact
        double sr = one_m_r - one_m_s;
        double pi_asym = (sr <= 0.0) ? 1.0 / one_m_r
                                     : std::atanh(std::sqrt(sr / one_m_r)) / (std::sqrt(sr) * std::sqrt(one_m_r));
        return pi_asym / (-0.5 * std::log(one_m_s));
    }
    if (s <= 0.5) {
        double k = carlson_rf(0.0, one_m_s, 1.0);
        double pi = k + (r == 0.0 ? 0.0 : (r / 3.0) * carlson_rj(0.0, one_m_s, 1.0, one_m_r));
        return pi / k;
    }
    // transformed arguments: 1 - s' = 1/(1-s), 1 - r' = 1/(1-r)
    double omsp = 1.0 / one_m_s, omrp = 1.0 / one_m_r;
    double rp = -r / one_m_r;
    double kp = carlson_rf(0.0, omsp, 1.0);
    double pip = kp + (rp == 0.0 ? 0.0 : (rp / 3.0) * carlson_rj(0.0, omsp, 1.0, omrp));
    return pip / (one_m_r * kp);
}

double e_over_k_c(double s, double one_m_s) {
    if (one_m_s <= 0.0) throw DomainError("e_over_k: s must be < 1");
    if (one_m_s < 1e-12) return 1.0 / (std::log(4.0) - 0.5 * std::log(one_m_s));
    double k = carlson_rf(0.0, one_m_s, 1.0);
    double e = k - (s / 3.0) * carlson_rd(0.0, one_m_s, 1.0);
    return e / k;
}

}  // namespace detail

}  // namespace cutflow
