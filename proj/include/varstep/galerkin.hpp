// Subspace reduction that keeps the variational structure: restricting the
// residual equation to range(V) yields a reduced problem whose energy is the
// lifted energy H(Vy), so every balance the full problem satisfies transfers.
// The non-structured route (projecting the explicit ODE form instead) is kept
// as an experiment hook; it generally breaks the balance.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "varstep/problem.hpp"

namespace varstep::galerkin {

struct Basis {
  Mat V;  // n x r, orthonormal columns

  int n() const { return V.rows; }
  int r() const { return V.cols; }
};

// Modified Gram-Schmidt with one reorthogonalization pass. Throws on rank
// deficiency, naming the offending column.
Basis orthonormalize(const std::vector<Vec>& vectors);

// Seeded Gaussian matrix, orthonormalized.
Basis random_basis(int n, int r, uint64_t seed);

Vec lift(const Basis& basis, const Vec& y);     // V y
Vec project(const Basis& basis, const Vec& u);  // V^T u

// Structured reduction: C_r(y) = V^T C(Vy) V, H_r(y) = H(Vy),
// H_r'(y) = V^T H'(Vy), f_r(t,y) = V^T f(t,Vy). Structure flags carry over by
// congruence. Algebraic masks and constraint metadata are not propagated;
// reducing a problem with algebraic coordinates generally yields a singular
// reduced operator, which surfaces as a recoverable solver error.
EvolutionProblem reduce(const EvolutionProblem& problem, const Basis& basis);

struct OdeSystem {
  int dim = 0;
  std::function<Vec(double, const Vec&)> rhs;
};

// Non-structured reduction of du/dt = B(u) H'(u) + g(u):
//   dy/dt = V^T B(Vy) H'(Vy) + V^T g(Vy).
OdeSystem reduce_nonstructured(const std::function<Mat(const Vec&)>& B,
                               const std::function<Vec(const Vec&)>& energy_gradient,
                               const std::function<Vec(const Vec&)>& source, const Basis& basis);

// Classical fixed-step RK4, used to integrate non-structured systems.
Vec rk4_integrate(const OdeSystem& sys, Vec y0, double t0, double T, int steps);

// Seeded search for a 2-dimensional SPD gradient system M du/dt = -u and a
// 1-dimensional basis where the structured and non-structured reductions
// dissipate the lifted energy H = |u|^2/2 at relative rates differing by at
// least min_discrepancy. The decay rates are available in closed form:
// structured 1/(v^T M v), non-structured v^T M^{-1} v.
struct CounterexampleInstance {
  uint64_t seed = 0;
  Mat M;        // 2x2 SPD
  Basis basis;  // 2x1
  double rate_structured = 0.0;
  double rate_nonstructured = 0.0;
  double discrepancy = 0.0;  // |rate_ns - rate_s| / rate_s
};

CounterexampleInstance counterexample_search(uint64_t base_seed, int max_instances = 5000,
                                             double min_discrepancy = 0.1);

// Full-order gradient system of a fixture instance: M du/dt = -u with
// H = |u|^2/2, ready for structured reduction onto the instance's basis.
EvolutionProblem counterexample_problem(const CounterexampleInstance& instance);

// The same dynamics rewritten as du/dt = -M^{-1} u and projected; this is
// the route that loses the energy identity.
OdeSystem counterexample_nonstructured(const CounterexampleInstance& instance);

// CSV serialization: a dimensions header followed by the entries in
// column-major order, one per line.
void save_basis_csv(const Basis& basis, const std::string& path);
Basis load_basis_csv(const std::string& path);

}  // namespace varstep::galerkin
