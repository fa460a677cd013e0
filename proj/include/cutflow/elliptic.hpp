#ifndef CUTFLOW_ELLIPTIC_HPP
#define CUTFLOW_ELLIPTIC_HPP

namespace cutflow {

// Complete elliptic integrals in the parameter convention: the second
// argument s multiplies t^2 directly inside the square root,
//   K(s)     = int_0^1 dt / (sqrt(1-t^2) sqrt(1-s t^2))
//   E(s)     = int_0^1 sqrt(1-s t^2)/sqrt(1-t^2) dt
//   Pi(r,s)  = int_0^1 dt / (sqrt(1-t^2) (1-r t^2) sqrt(1-s t^2))
// (s is the parameter m = k^2 of the modulus convention).

// K(s) for 0 <= s < 1, relative accuracy ~1e-15.
double ellip_k(double s);

// E(s) for 0 <= s <= 1.
double ellip_e(double s);

// Pi(r,s) for 0 <= r < 1, 0 <= s < 1.
double ellip_pi(double r, double s);

// Pi(r,s)/K(s) for 0 <= r <= s < 1.  Direct ratio for s <= 1/2; for s > 1/2
// the arguments are mapped through K(s) = K(s/(s-1))/sqrt(1-s) and
// Pi(r,s) = Pi(r/(r-1), s/(s-1))/((1-r) sqrt(1-s)), which move the branch
// points at 1 to -infinity; for 1-s < 1e-12 the logarithmic asymptotic form
// takes over.
double pi_over_k(double r, double s);

// theta(r,s) = atanh( sqrt( (sqrt(s)-sqrt(r)) / (1-sqrt(r)) ) ), 0 < r < s < 1.
double theta_ratio(double r, double s);

namespace detail {

// pi_over_k with the complements 1-r and 1-s supplied by the caller; the
// geometric configurations provide them in product form, free of the
// cancellation that 1-s suffers near degeneration.
double pi_over_k_c(double r, double one_m_r, double s, double one_m_s);

// E(s)/K(s) with the complement supplied.
double e_over_k_c(double s, double one_m_s);

// Carlson symmetric forms (duplication-theorem iterations); arguments may
// exceed [0,1) as long as they are in the standard Carlson domains.
double carlson_rf(double x, double y, double z);
double carlson_rd(double x, double y, double z);
double carlson_rj(double x, double y, double z, double p);

// K and Pi continued to parameter/characteristic <= 0 (needed by the
// transformed-argument evaluation in pi_over_k).
double complete_k_ext(double s);
double complete_pi_ext(double r, double s);

}  // namespace detail

}  // namespace cutflow

#endif
