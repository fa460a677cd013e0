#include "cutflow/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "cutflow/errors.hpp"

namespace cutflow {

namespace {
constexpr double kPi = std::numbers::pi;

double agree_tol(double a, double b, double tol) { return tol * std::max(1.0, std::max(std::fabs(a), std::fabs(b))); }
}  // namespace

double chebyshev_gap_integral(const Integrand& f, double a, double b, int n_nodes) {
    // x = mid + half cos(theta); the weight 1/sqrt((x-a)(b-x)) integrates to
    // the flat measure pi/n in theta
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < n_nodes; ++i) {
        double th = (i + 0.5) * kPi / n_nodes;
        acc += f(mid + half * std::cos(th));
    }
    return acc * kPi / n_nodes;
}

double chebyshev_cut_integral(const Integrand& f, double a, double b, int n_nodes) {
    // Gauss-Chebyshev second kind: int f(x) sqrt((x-a)(b-x)) dx
    //   = half^2 int f(x(th)) sin^2(th) dth
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 1; i <= n_nodes; ++i) {
        double th = i * kPi / (n_nodes + 1);
        double st = std::sin(th);
        acc += f(mid + half * std::cos(th)) * st * st;
    }
    return acc * half * half * kPi / (n_nodes + 1);
}

namespace {

template <typename Rule>
double adaptive_doubling(const Rule& rule, double tol, int n0, int n_max, const char* what) {
    double prev = rule(n0);
    for (int n = 2 * n0; n <= n_max; n *= 2) {
        double cur = rule(n);
        if (std::fabs(cur - prev) <= agree_tol(cur, prev, tol)) return cur;
        prev = cur;
    }
    throw NumericError(std::string(what) + ": quadrature did not converge");
}

}  // namespace

double chebyshev_gap_integral_adaptive(const Integrand& f, double a, double b, double tol, int n0, int n_max) {
    return adaptive_doubling([&](int n) { return chebyshev_gap_integral(f, a, b, n); }, tol, n0, n_max,
                             "chebyshev_gap_integral");
}

double chebyshev_cut_integral_adaptive(const Integrand& f, double a, double b, double tol, int n0, int n_max) {
    return adaptive_doubling([&](int n) { return chebyshev_cut_integral(f, a, b, n); }, tol, n0, n_max,
                             "chebyshev_cut_integral");
}

double tanh_sinh(const std::function<double(double, double)>& f, double a, double b, double tol, int max_level) {
    // x = mid + half tanh(pi/2 sinh t); nodes and weights on a geometric
    // level refinement.  The distance to the nearer endpoint is
    // half * (1 - |tanh(.)|) = half * 2/(exp(2|u|)+1), cancellation-free.
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const double t_max = 6.1;  // tanh(pi/2 sinh 6.1) is 1 - ~1e-280

    auto eval_level = [&](double h, bool odd_only) {
        double acc = 0.0;
        int k = odd_only ? 1 : 0;
        int step = odd_only ? 2 : 1;
        for (;; k += step) {
            double t = k * h;
            if (t > t_max) break;
            double u = 0.5 * kPi * std::sinh(t);
            double ch = std::cosh(u);
            double w = 0.5 * kPi * std::cosh(t) / (ch * ch);
            double tanh_u = std::tanh(u);
            double dist = half * 2.0 / (std::exp(2.0 * std::fabs(u)) + 1.0);
            if (dist == 0.0) break;
            double xp = mid + half * tanh_u;  // right of mid for u>0
            double xm = mid - half * tanh_u;
            if (k == 0) {
                acc += w * f(xp, half);
            } else {
                acc += w * (f(xp, dist) + f(xm, dist));
            }
        }
        return acc;
    };

    double h = 1.0;
    double sum = eval_level(h, false);
    double prev = half * h * sum;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        sum += eval_level(h, true);
        double cur = half * h * sum;
        if (level >= 3 && std::fabs(cur - prev) <= agree_tol(cur, prev, tol)) return cur;
        prev = cur;
    }
    return prev;  // best effort: DE converges double-exponentially, residual is near rounding
}

double tanh_sinh(const Integrand& f, double a, double b, double tol, int max_level) {
    return tanh_sinh([&f](double x, double) { return f(x); }, a, b, tol, max_level);
}

namespace {

// 15-point Gauss-Legendre on [-1,1]
constexpr double kGlx[15] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272, -0.7244177313601701,
    -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
    0.2011940939974345,  0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kGlw[15] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719, 0.1395706779261543,
    0.1662692058169939, 0.1861610000155622, 0.1984314853271116, 0.2025782419255613,
    0.1984314853271116, 0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

double gl15(const Integrand& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 15; ++i) acc += kGlw[i] * f(mid + half * kGlx[i]);
    return acc * half;
}

}  // namespace

std::vector<double> cumulative_integral(const Integrand& f, double x0, std::span<const double> xs) {
    std::vector<double> out(xs.size());
    double acc = 0.0, prev = x0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        acc += gl15(f, prev, xs[i]);
        out[i] = acc;
        prev = xs[i];
    }
    return out;
}

}  // namespace cutflow
