#ifndef CUTFLOW_POLY_HPP
#define CUTFLOW_POLY_HPP

#include <span>
#include <vector>

namespace cutflow {

// Dense real polynomial, coefficients stored in ascending degree order.
// Trailing zeros are trimmed exactly (no epsilon): coefficients here come
// from exact rational-like recurrences, so a zero is a real zero.
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    static Polynomial monomial(int degree, double coeff = 1.0);

    // degree of the zero polynomial is -1
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }

    // coefficient of x^k; zero beyond the stored range
    double coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : 0.0;
    }
    const std::vector<double>& coeffs() const { return coeffs_; }

    // Horner evaluation, fixed summation order
    double operator()(double x) const;

    Polynomial derivative() const;

    Polynomial& operator+=(const Polynomial& rhs);
    Polynomial& operator-=(const Polynomial& rhs);
    Polynomial& operator*=(double a);
    friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
    friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
    friend Polynomial operator*(Polynomial lhs, double a) { return lhs *= a; }
    friend Polynomial operator*(double a, Polynomial rhs) { return rhs *= a; }
    friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);

  private:
    void trim();
    std::vector<double> coeffs_;
};

// Polynomial potential V(z) = sum_{n=1}^{2p} t_n z^n with V(0) = 0,
// even degree and positive leading coefficient.
class Potential {
  public:
    // t[k] is the coefficient t_{k+1}; throws DomainError unless the degree
    // is even >= 2 and the leading coefficient is > 0
    explicit Potential(std::vector<double> t);

    int degree() const { return static_cast<int>(t_.size()); }  // 2p
    double coeff(int n) const { return (n >= 1 && n <= degree()) ? t_[n - 1] : 0.0; }

    double operator()(double x) const;
    const Polynomial& prime() const { return vprime_; }  // V'

    static Potential quartic_even();            // z^4/4 - z^2
    static Potential bleher_eynard(double c);   // z^4/4 - (4c/3) z^3 + (2c^2-1) z^2 + 8c z

  private:
    std::vector<double> t_;   // t_1 .. t_{2p}
    Polynomial vprime_;
};

// Truncated Laurent expansion at z = infinity: coeffs[k] multiplies
// z^{order-k}, k = 0 .. coeffs.size()-1.
struct LaurentTail {
    int order = 0;
    std::vector<double> coeffs;

    double coeff_of(int power) const {
        int k = order - power;
        return (k >= 0 && k < static_cast<int>(coeffs.size())) ? coeffs[k] : 0.0;
    }
};

// Series of 1/w1 at infinity, where w1(z) ~ z^s is the branch of
// sqrt(prod (z - beta_i)).  Result: z^{-s} (1 + a_1/z + ...), n_terms
// coefficients.  Endpoints must be strictly increasing.
LaurentTail inv_sqrt_branch_series(std::span<const double> endpoints, int n_terms);

// Series of w1 itself: z^{s} (1 + b_1/z + ...).
LaurentTail sqrt_branch_series(std::span<const double> endpoints, int n_terms);

// (numer(z)/w1(z))_+ , the polynomial part at infinity.  Zero polynomial
// when deg numer < s.
Polynomial polynomial_part(const Polynomial& numer, std::span<const double> endpoints);

// (z^{k-1} w1(z))_+ , used by the P_k construction; k >= 0.
Polynomial sqrt_polynomial_part(int k, std::span<const double> endpoints);

// z^{-1} Laurent coefficient of z^j V'(z)/w1(z): the loop-integral moment
// (1/2 pi i) oint z^j V'/w1 dz over a large contour around the support.
double infinity_moment(int j, const Potential& pot, std::span<const double> endpoints);

// z^{-1} Laurent coefficient of h(z) w1(z) with h = (V'/w1)_+ .
// The normalization condition requires this to equal -2T.
double normalization_moment(const Potential& pot, std::span<const double> endpoints);

}  // namespace cutflow

#endif
