// Bundled test systems. Each builder returns the evolution problem together
// with whatever else is known about it: a closed-form solution when one
// exists, constraint metadata, a recommended quadrature order per k, and a
// default initial state.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "varstep/problem.hpp"

namespace varstep::problems {

struct ProblemBundle {
  EvolutionProblem problem;
  Vec initial_state;
  std::function<Vec(double)> solution;  // closed form t -> state, if known
  std::function<Vec(const Vec&)> constraint;  // mirror of problem.constraint, if any
  std::function<int(int)> recommended_quadrature_order;  // k -> m
  std::string quadrature_note;  // the formula behind the recommendation
  std::string description;
  std::function<Vec(const Vec&)> reconstruct;  // subspace state -> nodal values, if applicable
};

// Phase-space oscillator: u = (p, q), skew constant C = [[0,1],[-1,0]],
// H = (p^2 + q^2)/2, dynamics dq/dt = -p, dp/dt = q.
ProblemBundle harmonic_oscillator(double p0 = 0.0, double q0 = 1.0);

// Same structure with H = p^2/2 + (1 - cos q); no closed form.
ProblemBundle nonlinear_pendulum(double p0 = 0.0, double q0 = 1.0);

// C = I, H = u^T A u / 2 with SPD A; closed form exp(-A t) u0.
ProblemBundle quadratic_gradient_flow(const Mat& A, Vec u0);

// C = I, H = sum_i (u_i^2 - 1)^2 / 4, seeded initial state.
ProblemBundle double_well_gradient_flow(int n, uint64_t seed = 0, double amplitude = 0.5);

// Planar pendulum on the unit circle: u = (p1, p2, q1, q2, lambda) with
// g(q) = (|q|^2 - 1)/2 enforced through its time derivative; lambda is
// algebraic. Initial data must satisfy g(q0) = 0 and q0 . p0 = 0.
ProblemBundle constrained_pendulum(double gravity, Vec p0 = {0.5, 0.0}, Vec q0 = {0.0, -1.0});

// One-dimensional phase separation on [0, L], n cells, double-well potential
// psi(s) = (s^2-1)^2/4 and interface energy gamma. The state lives on the
// zero-mean subspace (dimension n-1); the structure operator applies the
// pseudo-inverse of the Neumann stiffness matrix, factorized once. The total
// mass (mean) is a fixed affine offset of the reconstruction.
ProblemBundle cahn_hilliard_1d(int n_cells, double gamma, double L, double mean,
                               uint64_t seed = 0, double amplitude = 0.05);

// Eddy-current diffusion in one dimension: n interior nodes on [0,1], state
// clamped to zero at both ends, edge field b = da/dx, energy density
// h(b) = nu0 b^2/2 + nu2 b^4/4, lumped conductivity mass sigma h I, source
// f(t) = -h j(t).
ProblemBundle magnetoquasistatics_1d(int n, double sigma, double nu0, double nu2,
                                     std::function<Vec(double)> current_source,
                                     double a0_amplitude = 1.0);

// Constant-skew quadratic-energy system of dimension n with seeded SPD A and
// seeded nonsingular skew C; closed form through the matrix exponential.
ProblemBundle skew_quadratic_system(int n, uint64_t seed);

// Name-based registry used by the command-line runner. Unknown names or
// parameters are rejected.
ProblemBundle make_problem(const std::string& name, const std::map<std::string, std::string>& params,
                           uint64_t seed);

const std::vector<std::string>& problem_names();

}  // namespace varstep::problems
