#include "varstep/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace varstep {

namespace {

// Legendre polynomial P_m and derivative at x (on [-1,1]) via the three-term
// recurrence.
void legendre(int m, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (m == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int j = 2; j <= m; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = m * (x * p1 - p0) / (x * x - 1.0);
}

void check_distinct(const std::vector<double>& nodes) {
  for (size_t i = 0; i < nodes.size(); ++i)
    for (size_t j = i + 1; j < nodes.size(); ++j)
      if (nodes[i] == nodes[j]) throw std::invalid_argument("lagrange: duplicate interpolation nodes");
}

}  // namespace

QuadratureRule gauss_legendre(int m) {
  if (m < 1 || m > 20) throw std::invalid_argument("gauss_legendre: order must be in [1, 20]");
  QuadratureRule rule;
  rule.order = m;
  rule.nodes.assign(m, 0.5);
  rule.weights.assign(m, 1.0);

  const double pi = 3.14159265358979323846;
  // Newton on P_m from Chebyshev-like seeds. Only the upper half is solved;
  // the mirror image fills the lower half so the rule is exactly symmetric.
  for (int i = 0; i < m / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (m + 0.5));  // descending positive roots
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 60; ++it) {
      legendre(m, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(m, x, p, dp);
    const double w = 1.0 / ((1.0 - x * x) * dp * dp);  // already halved for (0,1)
    rule.nodes[m - 1 - i] = 0.5 * (1.0 + x);
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.weights[m - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (m % 2 == 1) {
    double p = 0.0, dp = 1.0;
    legendre(m, 0.0, p, dp);
    rule.weights[m / 2] = 1.0 / (dp * dp);
  }
  return rule;
}

double lagrange_eval(const std::vector<double>& nodes, int i, double s) {
  check_distinct(nodes);
  const int n = static_cast<int>(nodes.size());
  if (i < 0 || i >= n) throw std::invalid_argument("lagrange_eval: index out of range");
  double v = 1.0;
  for (int r = 0; r < n; ++r) {
    if (r == i) continue;
    v *= (s - nodes[r]) / (nodes[i] - nodes[r]);
  }
  return v;
}

double lagrange_deriv(const std::vector<double>& nodes, int i, double s) {
  check_distinct(nodes);
  const int n = static_cast<int>(nodes.size());
  if (i < 0 || i >= n) throw std::invalid_argument("lagrange_deriv: index out of range");
  double sum = 0.0;
  for (int r = 0; r < n; ++r) {
    if (r == i) continue;
    double term = 1.0 / (nodes[i] - nodes[r]);
    for (int p = 0; p < n; ++p) {
      if (p == i || p == r) continue;
      term *= (s - nodes[p]) / (nodes[i] - nodes[p]);
    }
    sum += term;
  }
  return sum;
}

double lagrange_integral(const std::vector<double>& nodes, int i, double s) {
  check_distinct(nodes);
  const int n = static_cast<int>(nodes.size());
  if (i < 0 || i >= n) throw std::invalid_argument("lagrange_integral: index out of range");
  // The basis polynomial has degree n-1; a rule with ceil(n/2) points is exact.
  const int m = n / 2 + 1;
  static thread_local int cached_m = -1;
  static thread_local QuadratureRule cached;
  if (cached_m != m) {
    cached = gauss_legendre(m);
    cached_m = m;
  }
  double v = 0.0;
  for (int q = 0; q < cached.order; ++q) {
    const double t = s * cached.nodes[q];
    double basis = 1.0;
    for (int r = 0; r < n; ++r) {
      if (r == i) continue;
      basis *= (t - nodes[r]) / (nodes[i] - nodes[r]);
    }
    v += cached.weights[q] * basis;
  }
  return s * v;
}

}  // namespace varstep
