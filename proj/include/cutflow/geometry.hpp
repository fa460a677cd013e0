#ifndef CUTFLOW_GEOMETRY_HPP
#define CUTFLOW_GEOMETRY_HPP

#include <array>
#include <span>
#include <vector>

#include "cutflow/poly.hpp"

namespace cutflow {

// Endpoints of an s-cut eigenvalue support, beta_1 < ... < beta_{2s}.
// Phases s = 1 and s = 2 are supported (the worked multi-cut cases; higher
// phases would need (s-1)-dimensional period normalization).
struct EndpointConfig {
    int s = 1;
    std::array<double, 4> beta{};  // beta[0 .. 2s-1] used

    static EndpointConfig one_cut(double b1, double b2);
    static EndpointConfig two_cut(double b1, double b2, double b3, double b4);
    static EndpointConfig from_span(std::span<const double> b);

    std::span<const double> view() const { return {beta.data(), static_cast<std::size_t>(2 * s)}; }
    int n_endpoints() const { return 2 * s; }

    double cut_lo(int j) const { return beta[static_cast<std::size_t>(2 * j)]; }      // j = 0..s-1
    double cut_hi(int j) const { return beta[static_cast<std::size_t>(2 * j + 1)]; }

    // index of the cut containing x, or -1
    int cut_of(double x) const;

    void validate() const;  // ordering and phase bounds
};

// r and s arguments of the elliptic integrals for a two-cut configuration,
// with their complements in exact product form: 1-r = (b4-b3)/(b4-b2),
// 1-s = (b2-b1)(b4-b3)/((b3-b1)(b4-b2)).  The complements stay accurate
// through the degenerate limits where 1-s itself would cancel away.
struct EllipticArgs {
    double r;
    double s;
    double one_m_r;
    double one_m_s;
};
EllipticArgs elliptic_args(const EndpointConfig& config);

// P_k(z) = (delta_{k0} + k/2) (z^{k-1} w1(z))_+ for one cut.
Polynomial p_k_one_cut(int k, const EndpointConfig& config);

// Normalization constant c_{k0} of the two-cut P_k: the unique constant
// making the gap integral of P_k / sqrt(prod(x - beta_i)) vanish.
double c_k0_two_cut(int k, const EndpointConfig& config);

// P_k(z) = (delta_{k0} + k/2) (z^{k-1} w1(z))_+ + c_{k0} for two cuts.
Polynomial p_k_two_cut(int k, const EndpointConfig& config);

// Phase dispatch.
Polynomial p_k(int k, const EndpointConfig& config);

// C(beta) = beta_4 - (beta_4 - beta_3) Pi(r,s)/K(s): the root of the
// two-cut P_0, always inside the gap (beta_2, beta_3).
double c_center(const EndpointConfig& config);

// Drop the coalesced pair (beta_l, beta_{l+1}), l 1-based; requires the
// pair to agree within 1e-9 * max(1, |beta_l|).
EndpointConfig reduce_config(const EndpointConfig& config, int l);

// Gap moment ratios M_j / M_0 where M_j = int_gap x^j / sqrt(Q) dx,
// j = 0..j_max.  M_0..M_2 come from the K/E/Pi closed forms, higher ones
// from the cycle identity oint d(x^j sqrt(Q)) = 0; both are uniformly valid
// through the degenerate limits.
std::vector<double> gap_moment_ratios(const EndpointConfig& config, int j_max);

// Direct quadrature of the normalization integral int_gap P/sqrt(Q) dx
// (the independent route; used to cross-check c_{k0}).
double normalization_integral(const Polynomial& p, const EndpointConfig& config, double tol = 1e-11);

}  // namespace cutflow

#endif
