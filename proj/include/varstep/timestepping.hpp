// Variational time stepping for C(u) du/dt = -H'(u) + f(t,u).
//
// The trial solution on each step is a polynomial of degree k+1, continuous
// across steps; its derivative (degree k) is stored by values at the k+1
// Gauss-Legendre parameter nodes of the unit interval. Test functions are the
// Lagrange basis at those nodes, paired with the residual through a
// quadrature rule of order m >= k+1. With m = k+1 the scheme collapses to
// average-vector-field collocation; larger m overintegrates non-polynomial
// terms. Coordinates listed in the problem's algebraic mask (zero C-column)
// are represented as degree-k interpolants of their nodal values and carry no
// continuity across steps.
#pragma once

#include <stdexcept>
#include <vector>

#include "varstep/newton.hpp"
#include "varstep/problem.hpp"
#include "varstep/quadrature.hpp"

namespace varstep {

struct TimeGrid {
  std::vector<double> nodes;  // t_0 < t_1 < ... < t_N

  static TimeGrid uniform(double t0, double t1, int steps);

  int steps() const { return static_cast<int>(nodes.size()) - 1; }
  double step_size(int n) const { return nodes[n + 1] - nodes[n]; }
  void validate() const;
};

// One step of the piecewise-polynomial solution on [t_start, t_start + tau].
// coeffs[j][i] holds, for differential coordinates i, the time-derivative
// value at parameter node j; for algebraic coordinates it holds the value of
// the coordinate itself at that node.
struct StepSolution {
  double t_start = 0.0;
  double tau = 0.0;
  int degree = 0;                    // k
  std::vector<double> param_nodes;   // k+1 Gauss nodes on (0,1)
  std::vector<char> algebraic;       // per-coordinate flag
  Vec u_start;
  std::vector<Vec> coeffs;           // k+1 blocks of length dim
  Vec u_end;
};

// State u_N(t_start + s*tau) and time derivative for s in [0, 1].
Vec step_state_at(const StepSolution& step, double s);
Vec step_derivative_at(const StepSolution& step, double s);

struct Trajectory {
  EvolutionProblem problem;
  TimeGrid grid;
  int degree = 0;
  QuadratureRule scheme_quad;
  double newton_tolerance = 0.0;
  std::vector<StepSolution> steps;
  std::vector<Vec> nodal_states;  // u at t_0 .. t_N
};

struct StepFailure : std::runtime_error {
  StepFailure(const std::string& what, NewtonResult nr) : std::runtime_error(what), newton(std::move(nr)) {}
  NewtonResult newton;
};

struct IntegrateFailure : std::runtime_error {
  IntegrateFailure(const std::string& what, Trajectory partial_traj, int step_index)
      : std::runtime_error(what), partial(std::move(partial_traj)), failed_step(step_index) {}
  Trajectory partial;  // all completed steps
  int failed_step;     // 1-based index of the step that failed
};

// Residual of the quadrature-discretized variational equations for a given
// step: block i equals tau * sum_q w_q l_i(gamma_q) [C(u_N) du_N/dt + H'(u_N)
// - f] evaluated at t_q = t_start + gamma_q*tau. Zero iff the step satisfies
// the discrete equations.
Vec step_residual(const EvolutionProblem& problem, const StepSolution& step, double t_start,
                  double tau, const QuadratureRule& quad);

// Solves one step with Newton from the constant predictor (all coefficients
// zero), or from the extrapolated previous step if one is given. Throws
// StepFailure on non-convergence.
StepSolution step(const EvolutionProblem& problem, double t_start, double tau, const Vec& u_start,
                  int k, const QuadratureRule& quad, const NewtonConfig& cfg,
                  const StepSolution* predict_from = nullptr);

// Fixed-grid integration; throws IntegrateFailure carrying the partial
// trajectory on step failure. Algebraic coordinates of u0 are ignored and
// recomputed within the first step.
Trajectory integrate(const EvolutionProblem& problem, const TimeGrid& grid, const Vec& u0, int k,
                     const QuadratureRule& quad, const NewtonConfig& cfg,
                     bool extrapolate_predictor = false);

// One step of the interval-averaged one-step scheme: solves
//   Cbar (u_n - u_prev)/tau = -Hbar' + fbar
// with all averages taken along the segment u(s) = u_prev + s (u_n - u_prev)
// under the given quadrature. Algebraically identical to step() with k = 0.
Vec discrete_gradient_step(const EvolutionProblem& problem, double t_start, double tau,
                           const Vec& u_start, const QuadratureRule& quad, const NewtonConfig& cfg);

// Dense output of the piecewise polynomial. At interior grid nodes the
// continuous (differential) value is returned together with the right-limit
// of algebraic coordinates.
Vec evaluate(const Trajectory& traj, double t);

}  // namespace varstep
