#include "cutflow/geometry.hpp"

#include <cmath>

#include "cutflow/elliptic.hpp"
#include "cutflow/errors.hpp"
#include "cutflow/quadrature.hpp"

namespace cutflow {

EndpointConfig EndpointConfig::one_cut(double b1, double b2) {
    EndpointConfig c;
    c.s = 1;
    c.beta = {b1, b2, 0.0, 0.0};
    c.validate();
    return c;
}

EndpointConfig EndpointConfig::two_cut(double b1, double b2, double b3, double b4) {
    EndpointConfig c;
    c.s = 2;
    c.beta = {b1, b2, b3, b4};
    c.validate();
    return c;
}

EndpointConfig EndpointConfig::from_span(std::span<const double> b) {
    EndpointConfig c;
    if (b.size() != 2 && b.size() != 4) throw DomainError("endpoint vector must have length 2 or 4");
    c.s = static_cast<int>(b.size()) / 2;
    for (std::size_t i = 0; i < b.size(); ++i) c.beta[i] = b[i];
    c.validate();
    return c;
}

void EndpointConfig::validate() const {
    // ties are allowed: critical limit configurations carry a coalesced
    // pair, and the degeneration identities are stated exactly there
    if (s != 1 && s != 2) throw DomainError("phase s must be 1 or 2");
    for (int i = 1; i < 2 * s; ++i)
        if (!(beta[static_cast<std::size_t>(i - 1)] <= beta[static_cast<std::size_t>(i)]))
            throw DomainError("endpoints must be non-decreasing");
}

int EndpointConfig::cut_of(double x) const {
    for (int j = 0; j < s; ++j)
        if (x >= cut_lo(j) && x <= cut_hi(j)) return j;
    return -1;
}

EllipticArgs elliptic_args(const EndpointConfig& config) {
    if (config.s != 2) throw DomainError("elliptic_args: two-cut configuration required");
    const auto& b = config.beta;
    EllipticArgs a;
    a.r = (b[2] - b[1]) / (b[3] - b[1]);
    a.s = (b[3] - b[0]) * (b[2] - b[1]) / ((b[2] - b[0]) * (b[3] - b[1]));
    a.one_m_r = (b[3] - b[2]) / (b[3] - b[1]);
    a.one_m_s = (b[1] - b[0]) * (b[3] - b[2]) / ((b[2] - b[0]) * (b[3] - b[1]));
    return a;
}

Polynomial p_k_one_cut(int k, const EndpointConfig& config) {
    if (config.s != 1) throw DomainError("p_k_one_cut: one-cut configuration required");
    if (k < 0) throw DomainError("p_k: k must be >= 0");
    double pre = (k == 0 ? 1.0 : 0.5 * k);
    return pre * sqrt_polynomial_part(k, config.view());
}

namespace {

// true when the gap measure 1/sqrt(Q) degenerates to a point mass: some
// pair adjacent to the gap has coalesced
bool tied(double lo, double hi) { return hi - lo <= 1e-14 * std::max(1.0, std::fabs(hi)); }

}  // namespace

std::vector<double> gap_moment_ratios(const EndpointConfig& config, int j_max) {
    if (config.s != 2) throw DomainError("gap_moment_ratios: two-cut configuration required");
    const auto& b = config.beta;

    std::vector<double> R(static_cast<std::size_t>(std::max(j_max, 2)) + 1);
    if (tied(b[1], b[2]) || tied(b[2], b[3]) || tied(b[0], b[1])) {
        // point-mass limits: the inverse square root concentrates where the
        // coalesced pair touches the gap
        double at = tied(b[0], b[1]) ? b[1] : b[2];
        double v = 1.0;
        for (std::size_t j = 0; j < R.size(); ++j, v *= at) R[j] = v;
        R.resize(static_cast<std::size_t>(j_max) + 1);
        return R;
    }

    auto args = elliptic_args(config);
    double piok = detail::pi_over_k_c(args.r, args.one_m_r, args.s, args.one_m_s);
    double eok = detail::e_over_k_c(args.s, args.one_m_s);

    R[0] = 1.0;
    R[1] = b[3] - (b[3] - b[2]) * piok;
    R[2] = b[3] * b[3] - 0.5 * (b[3] - b[2]) * (b[3] - b[1]) -
           0.5 * (b[2] - b[0]) * (b[3] - b[1]) * eok -
           0.5 * (b[0] + b[1] + b[2] + b[3]) * (b[3] - b[2]) * piok;

    if (j_max >= 3) {
        // Q = prod (x - beta_i) = sum q_m x^m
        std::array<double, 5> q{1.0, 0.0, 0.0, 0.0, 0.0};
        for (int i = 0; i < 4; ++i) {
            std::array<double, 5> next{};
            for (int m = 0; m < 5; ++m) {
                if (q[static_cast<std::size_t>(m)] == 0.0) continue;
                if (m + 1 < 5) next[static_cast<std::size_t>(m + 1)] += q[static_cast<std::size_t>(m)];
                next[static_cast<std::size_t>(m)] -= b[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(m)];
            }
            q = next;
        }
        // oint d(x^j sqrt(Q)) = 0 over the gap cycle:
        //   sum_m (j + m/2) q_m M_{j+m-1} = 0,  j >= 0
        // j = 0 gives M_3, j >= 1 give the rest (q_4 = 1).
        R[3] = -(0.5 * q[1] * R[0] + 1.0 * q[2] * R[1] + 1.5 * q[3] * R[2]) / 2.0;
        for (int j = 1; j + 3 <= j_max; ++j) {
            double acc = j * q[0] * R[static_cast<std::size_t>(j - 1)] +
                         (j + 0.5) * q[1] * R[static_cast<std::size_t>(j)] +
                         (j + 1.0) * q[2] * R[static_cast<std::size_t>(j + 1)] +
                         (j + 1.5) * q[3] * R[static_cast<std::size_t>(j + 2)];
            R[static_cast<std::size_t>(j + 3)] = -acc / (j + 2.0);
        }
    }
    R.resize(static_cast<std::size_t>(j_max) + 1);
    return R;
}

namespace {

// (z^{k-1} w1)_+ for a two-cut configuration, valid through a coalesced
// pair: w1 = (z - beta) w1_reduced there, so the polynomial part factors
// into two reduced-configuration parts
Polynomial sqrt_part_two_cut(int k, const EndpointConfig& config) {
    const auto& b = config.beta;
    int tie = -1;
    for (int i = 0; i + 1 < 4; ++i)
        if (tied(b[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i + 1)])) tie = i;
    if (tie < 0) return sqrt_polynomial_part(k, config.view());
    double beta = b[static_cast<std::size_t>(tie)];
    std::vector<double> red;
    for (int i = 0; i < 4; ++i)
        if (i != tie && i != tie + 1) red.push_back(b[static_cast<std::size_t>(i)]);
    if (tied(red[0], red[1])) throw DomainError("p_k: fully degenerate configuration");
    return sqrt_polynomial_part(k + 1, red) - beta * sqrt_polynomial_part(k, red);
}

}  // namespace

double c_k0_two_cut(int k, const EndpointConfig& config) {
    if (config.s != 2) throw DomainError("c_k0_two_cut: two-cut configuration required");
    if (k < 0) throw DomainError("c_k0: k must be >= 0");
    double pre = (k == 0 ? 1.0 : 0.5 * k);
    Polynomial g = sqrt_part_two_cut(k, config);
    auto R = gap_moment_ratios(config, std::max(g.degree(), 2));
    double acc = 0.0;
    for (int j = 0; j <= g.degree(); ++j) acc += g.coeff(j) * R[static_cast<std::size_t>(j)];
    return -pre * acc;
}

Polynomial p_k_two_cut(int k, const EndpointConfig& config) {
    double pre = (k == 0 ? 1.0 : 0.5 * k);
    Polynomial p = pre * sqrt_part_two_cut(k, config);
    return p + Polynomial({c_k0_two_cut(k, config)});
}

Polynomial p_k(int k, const EndpointConfig& config) {
    return config.s == 1 ? p_k_one_cut(k, config) : p_k_two_cut(k, config);
}

double c_center(const EndpointConfig& config) {
    if (config.s != 2) throw DomainError("c_center: two-cut configuration required");
    const auto& b = config.beta;
    if (tied(b[2], b[3])) return b[3];  // (b4-b3) Pi/K -> 0
    if (tied(b[1], b[2])) return b[2];  // r = s = 0, Pi/K = 1
    auto args = elliptic_args(config);
    return b[3] - (b[3] - b[2]) * detail::pi_over_k_c(args.r, args.one_m_r, args.s, args.one_m_s);
}

EndpointConfig reduce_config(const EndpointConfig& config, int l) {
    if (l < 1 || l + 1 > config.n_endpoints()) throw DomainError("reduce_config: pair index out of range");
    double bl = config.beta[static_cast<std::size_t>(l - 1)];
    double br = config.beta[static_cast<std::size_t>(l)];
    if (std::fabs(bl - br) > 1e-9 * std::max(1.0, std::fabs(bl)))
        throw DomainError("reduce_config: pair not coalesced within tolerance");
    std::vector<double> rest;
    for (int i = 0; i < config.n_endpoints(); ++i)
        if (i != l - 1 && i != l) rest.push_back(config.beta[static_cast<std::size_t>(i)]);
    return EndpointConfig::from_span(rest);
}

double normalization_integral(const Polynomial& p, const EndpointConfig& config, double tol) {
    if (config.s != 2) throw DomainError("normalization_integral: two-cut configuration required");
    const auto& b = config.beta;
    auto f = [&](double x) { return p(x) / std::sqrt((x - b[0]) * (b[3] - x)); };
    return chebyshev_gap_integral_adaptive(f, b[1], b[2], tol);
}

}  // namespace cutflow
