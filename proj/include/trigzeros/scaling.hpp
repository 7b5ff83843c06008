#pragma once

#include "trigzeros/analytic.hpp"

namespace trigzeros {

struct GTriple {
  double g;
  double dg;
  double ddg;
};

// sin(x)/x and its first two derivatives; Taylor series through the x^8
// terms below the crossover.
GTriple g_triple(double x);

// Limit of the conditional derivative correlation,
//   R*(x) = [g''(1-g^2) + g (g')^2] / [(1/3)(1-g^2) - (g')^2].
// Both numerator and denominator are Theta(x^4) at the origin; the series
// path keeps full precision there.
double r_star(double x);

// Integrand of the limit constant:
//   [(1-g^2) - 3 (g')^2] / (1-g^2)^{3/2} * crossing_kernel(R*) - 1.
double c0_integrand(double x);

struct C0Result {
  double c0 = 0.0;
  double error_estimate = 0.0;
  double upper_limit = 0.0;  // quadrature truncation point; analytic tail added beyond
  bool tol_achieved = true;
};

// Improper integral of c0_integrand over (0, inf). Quadrature runs to a
// finite X picked from `tol`; the remainder uses the large-x form of the
// integrand, (1 - 4 cos 2x)/x^2 + 12 sin(2x)/x^3 + O(x^-4), whose tail
// integrates to 1/X + 2 sin(2X)/X^2 + O(X^-3).
C0Result compute_c0(double tol = 1e-6);

// c = (4/(3 pi)) c0 + 2/sqrt(3).
double compute_c(double tol = 1e-6);

// |f_N(x) - g(x)| for the scaled finite-N covariance.
double scaled_covariance_error(int degree, double x);

}  // namespace trigzeros
