// Abstract evolution problems C(u) du/dt = -H'(u) + f(t,u) on R^n.
//
// The structure operator C is exposed as an action (u, v) -> C(u) v plus an
// optional dense assembly for Jacobian construction. The duality pairing is
// the Euclidean dot product; mass or weighting matrices are folded into C,
// H' and f by the problem builders.
#pragma once

#include <functional>
#include <vector>

#include "varstep/linalg.hpp"

namespace varstep {

struct EvolutionProblem {
  int dim = 0;

  std::function<double(const Vec&)> energy;                 // H(u)
  std::function<Vec(const Vec&)> energy_gradient;           // H'(u)
  std::function<Vec(const Vec&, const Vec&)> structure_apply;  // C(u) v
  std::function<Vec(double, const Vec&)> source;            // f(t,u), empty means 0

  // Optional exact derivative blocks for Newton; when all pieces needed for a
  // problem are present they take precedence over finite differences.
  std::function<Mat(const Vec&)> structure_matrix;             // dense C(u)
  std::function<Mat(const Vec&)> energy_hessian;               // dH'/du
  std::function<Mat(const Vec&, const Vec&)> structure_apply_jacobian;  // d/du [C(u) v]
  std::function<Mat(double, const Vec&)> source_jacobian;      // df/du

  bool is_C_constant = false;
  bool is_C_skew = false;
  bool is_C_spd = false;

  // Degree of H as a polynomial in u, or -1 if unknown / not polynomial.
  // Used by the audit to certify quadrature exactness.
  int energy_poly_degree = -1;

  // Coordinates whose C-column is identically zero (no time derivative).
  std::vector<int> algebraic_mask;

  // Optional constraint metadata for DAE diagnostics.
  std::function<Vec(const Vec&)> constraint;            // g(u)
  std::function<Mat(const Vec&)> constraint_jacobian;   // dg/du

  bool has_source() const { return static_cast<bool>(source); }
  Vec source_value(double t, const Vec& u) const {
    return has_source() ? source(t, u) : Vec(dim, 0.0);
  }
  std::vector<char> algebraic_lookup() const;
};

// C(u)*udot + H'(u) - f(t,u); zero exactly when (u, udot) solves the problem
// at time t.
Vec residual(const EvolutionProblem& p, double t, const Vec& u, const Vec& udot);

// <f(t,u), udot> - <C(u) udot, udot>, the instantaneous rate of H along a
// solution.
double energy_rate(const EvolutionProblem& p, double t, const Vec& u, const Vec& udot);

// Max over coordinates of |central difference of H - H'(u)_i| / max(1, |H'(u)_i|).
double check_gradient_consistency(const EvolutionProblem& p, const Vec& u, double h);

}  // namespace varstep
