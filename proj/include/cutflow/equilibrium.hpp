#ifndef CUTFLOW_EQUILIBRIUM_HPP
#define CUTFLOW_EQUILIBRIUM_HPP

#include <string>
#include <vector>

#include "cutflow/geometry.hpp"
#include "cutflow/poly.hpp"

namespace cutflow {

// h(z) = (V'(z)/w1(z))_+ for the given endpoint configuration.
Polynomial h_polynomial(const Potential& pot, const EndpointConfig& config);

// Boundary/real values of the branch w1 off the support: w1(x) is real
// there, with sign (-1)^{s-i} in region i (region 0 left of beta_1, region
// s right of beta_{2s}).  On cut j (0-based) the upper boundary value is
// i (-1)^{s-1-j} |prod|^{1/2}; this returns that magnitude-with-sign as the
// coefficient of i.
double w1_exterior(const EndpointConfig& config, double x);
double w1_plus_imag_coeff(const EndpointConfig& config, double x);  // on a cut

// rho(x) = h(x) w1+(x) / (2 pi i T) for x strictly inside a cut.
double density_at(const Potential& pot, double T, const EndpointConfig& config, double x);

// int_J rho dx by per-cut quadrature absorbing the square-root endpoint
// factors; 1 for an admissible configuration.
double density_norm(const Potential& pot, double T, const EndpointConfig& config);

// Residuals sum_k t_k P_k(beta_i, beta) with t_0 = -T, one per endpoint;
// the zero vector characterizes an endpoint solution.
std::vector<double> hodograph_residual(const Potential& pot, double T, const EndpointConfig& config);

struct RegionCheck {
    std::string label;  // "left", "gap1", ..., "right"
    double lo, hi;      // sampled range
    double margin;      // interior minimum of the inequality margin
    double argmin;      // where it is attained
    bool ok;            // margin > tolerance
};

struct AdmissibilityReport {
    bool density_positive = false;
    bool h_nonvanishing_on_support = false;
    std::vector<RegionCheck> exterior;  // variational inequalities off the support
    double rho_min = 0.0;
    double h_abs_min = 0.0;
    double residual_max = 0.0;
    enum class Verdict { Regular, Singular, Inadmissible } verdict = Verdict::Inadmissible;
};

struct AdmissibilityOptions {
    int samples_per_region = 512;
    double exterior_reach = 10.0;   // truncate exterior checks at beta_edge +- reach
    double residual_tol = 1e-6;     // precondition on the hodograph residuals
    double singular_tol = 1e-7;     // |margin| below this is a critical touch
};

AdmissibilityReport admissibility(const Potential& pot, double T, const EndpointConfig& config,
                                  const AdmissibilityOptions& opts = {});

// Interior minimum of the scaled exterior-inequality margin on one side of
// the support, minimized continuously in x (golden section on the scan
// variable).  This is the quantity whose zero crossing in T locates a
// birth from the one-cut side.
double exterior_dip_margin(const Potential& pot, const EndpointConfig& config, bool right,
                           double reach = 10.0);

// Sampled density for export.
struct DensityProfile {
    EndpointConfig config;
    double T = 0.0;
    // one (x, rho) table per cut
    std::vector<std::vector<std::pair<double, double>>> samples;
    double norm = 0.0;
};

DensityProfile density_profile(const Potential& pot, double T, const EndpointConfig& config,
                               int samples_per_cut = 256);

}  // namespace cutflow

#endif
