#ifndef CUTFLOW_QUADRATURE_HPP
#define CUTFLOW_QUADRATURE_HPP

#include <functional>
#include <span>
#include <vector>

namespace cutflow {

using Integrand = std::function<double(double)>;

// int_a^b f(x)/sqrt((x-a)(b-x)) dx by Gauss-Chebyshev (first kind): nodes
// absorb both inverse-square-root endpoint singularities.
double chebyshev_gap_integral(const Integrand& f, double a, double b, int n_nodes);

// int_a^b f(x) sqrt((x-a)(b-x)) dx by Gauss-Chebyshev (second kind).
double chebyshev_cut_integral(const Integrand& f, double a, double b, int n_nodes);

// Same, doubling nodes from n0 until two successive levels agree to tol
// (absolute + relative mix).  Throws NumericError on non-convergence.
double chebyshev_gap_integral_adaptive(const Integrand& f, double a, double b, double tol,
                                       int n0 = 64, int n_max = 1 << 16);
double chebyshev_cut_integral_adaptive(const Integrand& f, double a, double b, double tol,
                                       int n0 = 64, int n_max = 1 << 16);

// Tanh-sinh (double-exponential) quadrature of int_a^b f dx.  Handles
// integrable endpoint singularities (inverse square roots, logarithms).
// f is called as f(x, d) where d is the distance to the nearer endpoint,
// computed without cancellation; integrands with endpoint singularities
// should use d instead of forming x-a or b-x themselves.
double tanh_sinh(const std::function<double(double, double)>& f, double a, double b,
                 double tol = 1e-12, int max_level = 12);

// Convenience overload for integrands that do not need the distance.
double tanh_sinh(const Integrand& f, double a, double b, double tol = 1e-12, int max_level = 12);

// Cumulative integrals of a smooth integrand at sorted sample points:
// returns F_i = int_{x0}^{xs[i]} f dx, composite 15-point Gauss-Legendre
// per segment.
std::vector<double> cumulative_integral(const Integrand& f, double x0, std::span<const double> xs);

}  // namespace cutflow

#endif
