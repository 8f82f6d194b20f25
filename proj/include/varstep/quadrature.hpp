// Gauss-Legendre rules on (0,1) and Lagrange interpolation helpers.
#pragma once

#include <vector>

#include "varstep/linalg.hpp"

namespace varstep {

// Nodes gamma_1..gamma_m in (0,1), weights w_1..w_m > 0 with sum(w) = 1.
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule with m nodes, 1 <= m <= 20. Exact for polynomials of
// degree <= 2m-1 on the unit interval.
QuadratureRule gauss_legendre(int m);

// Value of the i-th Lagrange basis polynomial for the given (pairwise
// distinct) nodes, evaluated at s.
double lagrange_eval(const std::vector<double>& nodes, int i, double s);

// Derivative of the i-th Lagrange basis polynomial at s.
double lagrange_deriv(const std::vector<double>& nodes, int i, double s);

// Integral of the i-th Lagrange basis polynomial over [0, s], computed with a
// Gauss rule of sufficient order (exact).
double lagrange_integral(const std::vector<double>& nodes, int i, double s);

}  // namespace varstep
