// Checks the discrete energy balance on computed trajectories.
//
// On every interval the balance reads
//   H(u_n) - H(u_{n-1}) = integral of <f, du/dt> - <C du/dt, du/dt>,
// evaluated here with an audit quadrature that may differ from the scheme's.
// When the integrand <H'(u_N), du_N/dt> is a polynomial integrated exactly by
// both rules, the per-interval residual is bounded by the Newton tolerance;
// the report records whether that certification applies.
#pragma once

#include <functional>
#include <vector>

#include "varstep/timestepping.hpp"

namespace varstep::audit {

struct IntervalRecord {
  int n = 0;                        // 1-based interval index
  double t = 0.0;                   // t_n
  double energy = 0.0;              // H(u_n)
  double work_integral = 0.0;       // integral of <f, du/dt>
  double dissipation_integral = 0.0;  // integral of <C du/dt, du/dt>
  double identity_residual = 0.0;   // R_n
};

struct EnergyAuditReport {
  double initial_energy = 0.0;
  std::vector<IntervalRecord> records;  // one per interval, n = 1..N
  double max_abs_residual = 0.0;
  std::vector<int> monotonicity_violations;  // filled for SPD-C, source-free problems
  int scheme_quad_order = 0;
  int audit_quad_order = 0;
  double newton_tolerance = 0.0;
  bool exact_integration = false;   // integrands certified exact for both rules
  bool certified_bound_holds = false;  // exact_integration && max residual <= 10 * tol
};

EnergyAuditReport energy_identity_residual(const EvolutionProblem& problem, const Trajectory& traj,
                                           const QuadratureRule& audit_quad, bool parallel = true);

// Indices n with H(u_n) > H(u_{n-1}) + 10 * Newton tolerance. Requires an SPD
// structure operator and no source term.
std::vector<int> monotonicity_check(const EvolutionProblem& problem, const Trajectory& traj);

// Max over grid nodes and components of |g(u_n) - g(u_0)|.
double constraint_drift(const Trajectory& traj, const std::function<Vec(const Vec&)>& g);

struct ConvergenceRow {
  int N = 0;
  double tau = 0.0;
  double error = 0.0;           // ||u_N(T) - reference||_2
  double error_sup = 0.0;       // per-coordinate sup-norm
  double observed_order = 0.0;  // valid when has_order
  bool has_order = false;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
};

// Errors at final time against a reference state, with observed orders
// between consecutive rows. Rows are computed concurrently and assembled in
// ascending-N order.
ConvergenceTable convergence_study(const EvolutionProblem& problem, const Vec& u0, double T, int k,
                                   const QuadratureRule& quad, const std::vector<int>& N_list,
                                   const NewtonConfig& cfg, const Vec& reference_at_T);

ConvergenceTable convergence_study(const EvolutionProblem& problem, const Vec& u0, double T, int k,
                                   const QuadratureRule& quad, const std::vector<int>& N_list,
                                   const NewtonConfig& cfg, const std::function<Vec(double)>& closed_form);

// High-order self-reference: a k=3, m=6 run on 8x the finest grid.
Vec self_reference(const EvolutionProblem& problem, const Vec& u0, double T, int finest_N,
                   const NewtonConfig& cfg);

// Reference oracle: matrix exponential by scaling and squaring.
Mat matrix_exponential(const Mat& A);

}  // namespace varstep::audit
