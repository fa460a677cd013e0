// Test-side oracles, independent of the library's evaluation paths:
// adaptive Simpson quadrature plus the defining-integral forms of the
// elliptic kernels and brute-force density integrals.
#ifndef CUTFLOW_TESTS_ORACLES_HPP
#define CUTFLOW_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <numbers>

namespace oracles {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                                   double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 48) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Defining integrals through t = sin(phi), which removes the 1/sqrt(1-t^2)
// endpoint factor.
inline double ellip_k(double s, double tol = 1e-12) {
    return adaptive_simpson([s](double p) { double st = std::sin(p); return 1.0 / std::sqrt(1.0 - s * st * st); },
                            0.0, std::numbers::pi / 2.0, tol);
}

inline double ellip_e(double s, double tol = 1e-12) {
    return adaptive_simpson([s](double p) { double st = std::sin(p); return std::sqrt(1.0 - s * st * st); }, 0.0,
                            std::numbers::pi / 2.0, tol);
}

inline double ellip_pi(double r, double s, double tol = 1e-12) {
    return adaptive_simpson(
        [r, s](double p) {
            double st2 = std::sin(p) * std::sin(p);
            return 1.0 / ((1.0 - r * st2) * std::sqrt(1.0 - s * st2));
        },
        0.0, std::numbers::pi / 2.0, tol);
}

}  // namespace oracles

#endif
