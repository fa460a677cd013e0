#include "cutflow/poly.hpp"

#include <cmath>
#include <cstddef>
#include <utility>

#include "cutflow/errors.hpp"

namespace cutflow {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::monomial(int degree, double coeff) {
    std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
    c.back() = coeff;
    return Polynomial(std::move(c));
}

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial{};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
    trim();
    return *this;
}

Polynomial& Polynomial::operator*=(double a) {
    for (double& c : coeffs_) c *= a;
    trim();
    return *this;
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
    if (lhs.is_zero() || rhs.is_zero()) return Polynomial{};
    std::vector<double> c(lhs.coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) c[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
    return Polynomial(std::move(c));
}

Potential::Potential(std::vector<double> t) : t_(std::move(t)) {
    if (t_.empty() || t_.size() % 2 != 0) throw DomainError("potential degree must be even and >= 2");
    if (t_.back() <= 0.0) throw DomainError("potential leading coefficient must be positive");
    std::vector<double> d(t_.size());
    for (std::size_t n = 1; n <= t_.size(); ++n) d[n - 1] = static_cast<double>(n) * t_[n - 1];
    vprime_ = Polynomial(std::move(d));
}

double Potential::operator()(double x) const {
    double acc = 0.0;
    for (std::size_t i = t_.size(); i-- > 0;) acc = acc * x + t_[i];
    return acc * x;  // V(0) = 0: no constant term
}

Potential Potential::quartic_even() { return Potential({0.0, -1.0, 0.0, 0.25}); }

Potential Potential::bleher_eynard(double c) {
    return Potential({8.0 * c, 2.0 * c * c - 1.0, -4.0 * c / 3.0, 0.25});
}

namespace {

void check_endpoints(std::span<const double> endpoints) {
    if (endpoints.empty() || endpoints.size() % 2 != 0)
        throw DomainError("endpoint vector must have even positive length");
    for (std::size_t i = 1; i < endpoints.size(); ++i)
        if (!(endpoints[i - 1] < endpoints[i]))
            throw DomainError("endpoints must be strictly increasing");
}

// Multiply the running series (in u = 1/z) by (1 - b u)^p for p = +-1/2.
// The binomial coefficients follow the ratio recurrence
// binom(p,k)(-b)^k = binom(p,k-1)(-b)^{k-1} * (p-k+1)/k * (-b).
std::vector<double> binomial_product(std::span<const double> endpoints, double p, int n_terms) {
    std::vector<double> acc(static_cast<std::size_t>(n_terms), 0.0);
    acc[0] = 1.0;
    std::vector<double> factor(acc.size()), next(acc.size());
    for (double b : endpoints) {
        factor[0] = 1.0;
        double term = 1.0;
        for (int k = 1; k < n_terms; ++k) {
            term *= (p - (k - 1)) / static_cast<double>(k) * (-b);
            factor[static_cast<std::size_t>(k)] = term;
        }
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < n_terms; ++i) {
            if (acc[static_cast<std::size_t>(i)] == 0.0) continue;
            for (int j = 0; i + j < n_terms; ++j)
                next[static_cast<std::size_t>(i + j)] +=
                    acc[static_cast<std::size_t>(i)] * factor[static_cast<std::size_t>(j)];
        }
        acc.swap(next);
    }
    return acc;
}

}  // namespace

LaurentTail inv_sqrt_branch_series(std::span<const double> endpoints, int n_terms) {
    check_endpoints(endpoints);
    if (n_terms < 1) throw DomainError("n_terms must be >= 1");
    LaurentTail tail;
    tail.order = -static_cast<int>(endpoints.size()) / 2;
    tail.coeffs = binomial_product(endpoints, -0.5, n_terms);
    return tail;
}

LaurentTail sqrt_branch_series(std::span<const double> endpoints, int n_terms) {
    check_endpoints(endpoints);
    if (n_terms < 1) throw DomainError("n_terms must be >= 1");
    LaurentTail tail;
    tail.order = static_cast<int>(endpoints.size()) / 2;
    tail.coeffs = binomial_product(endpoints, 0.5, n_terms);
    return tail;
}

Polynomial polynomial_part(const Polynomial& numer, std::span<const double> endpoints) {
    check_endpoints(endpoints);
    const int s = static_cast<int>(endpoints.size()) / 2;
    const int d = numer.degree();
    if (d < s) return Polynomial{};
    // numer(z) z^{-s} sum_k a_k z^{-k}: the coefficient of z^m collects
    // a_k numer_{m+s+k}; series length d+s+4 keeps every needed a_k exact.
    LaurentTail inv = inv_sqrt_branch_series(endpoints, d + s + 4);
    std::vector<double> out(static_cast<std::size_t>(d - s) + 1, 0.0);
    for (int m = 0; m <= d - s; ++m) {
        double acc = 0.0;
        for (int k = 0; m + s + k <= d; ++k) acc += inv.coeffs[static_cast<std::size_t>(k)] * numer.coeff(m + s + k);
        out[static_cast<std::size_t>(m)] = acc;
    }
    return Polynomial(std::move(out));
}

Polynomial sqrt_polynomial_part(int k, std::span<const double> endpoints) {
    check_endpoints(endpoints);
    if (k < 0) throw DomainError("k must be >= 0");
    const int s = static_cast<int>(endpoints.size()) / 2;
    const int deg = k - 1 + s;  // degree of (z^{k-1} w1)_+
    if (deg < 0) return Polynomial{};
    LaurentTail w1 = sqrt_branch_series(endpoints, deg + 1);
    // z^{k-1} z^{s}(b_0 + b_1/z + ...): coefficient of z^m is b_{deg-m}
    std::vector<double> out(static_cast<std::size_t>(deg) + 1, 0.0);
    for (int m = 0; m <= deg; ++m) out[static_cast<std::size_t>(m)] = w1.coeffs[static_cast<std::size_t>(deg - m)];
    return Polynomial(std::move(out));
}

double infinity_moment(int j, const Potential& pot, std::span<const double> endpoints) {
    check_endpoints(endpoints);
    if (j < 0 || j > pot.degree()) throw DomainError("moment order out of range");
    const int s = static_cast<int>(endpoints.size()) / 2;
    const Polynomial& vp = pot.prime();
    // z^j V' has degree j + 2p - 1; the z^{-1} coefficient needs the series
    // term a_{j+m-s} for each monomial m t_m z^{m-1}
    LaurentTail inv = inv_sqrt_branch_series(endpoints, j + pot.degree() + s + 4);
    double acc = 0.0;
    for (int m = 0; m <= vp.degree(); ++m) {
        int k = j + m + 1 - s;  // z^{j+m-s-k} = z^{-1}
        if (k >= 0) acc += vp.coeff(m) * inv.coeffs[static_cast<std::size_t>(k)];
    }
    return acc;
}

double normalization_moment(const Potential& pot, std::span<const double> endpoints) {
    check_endpoints(endpoints);
    const int s = static_cast<int>(endpoints.size()) / 2;
    Polynomial h = polynomial_part(pot.prime(), endpoints);
    LaurentTail w1 = sqrt_branch_series(endpoints, h.degree() + 2 * s + 2);
    double acc = 0.0;
    for (int j = 0; j <= h.degree(); ++j) acc += h.coeff(j) * w1.coeffs[static_cast<std::size_t>(j + s + 1)];
    return acc;
}

}  // namespace cutflow
