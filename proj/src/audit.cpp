#include "varstep/audit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace varstep::audit {

namespace {

IntervalRecord interval_record(const EvolutionProblem& problem, const Trajectory& traj, int n,
                               const QuadratureRule& audit_quad) {
  const StepSolution& stp = traj.steps[n - 1];
  IntervalRecord rec;
  rec.n = n;
  rec.t = traj.grid.nodes[n];
  rec.energy = problem.energy(traj.nodal_states[n]);
  double work = 0.0, diss = 0.0;
  for (int q = 0; q < audit_quad.order; ++q) {
    const double s = audit_quad.nodes[q];
    const double w = audit_quad.weights[q] * stp.tau;
    const Vec u = step_state_at(stp, s);
    const Vec udot = step_derivative_at(stp, s);
    diss += w * dot(problem.structure_apply(u, udot), udot);
    if (problem.has_source()) work += w * dot(problem.source(stp.t_start + s * stp.tau, u), udot);
  }
  rec.work_integral = work;
  rec.dissipation_integral = diss;
  const double prev = problem.energy(traj.nodal_states[n - 1]);
  rec.identity_residual = rec.energy - prev - (work - diss);
  return rec;
}

// Degree of t -> <H'(u_N(t)), du_N/dt(t)> when H is polynomial of degree d.
int balance_integrand_degree(int energy_poly_degree, int k) {
  if (energy_poly_degree < 1) return -1;
  return (k + 1) * (energy_poly_degree - 1) + k;
}

}  // namespace

EnergyAuditReport energy_identity_residual(const EvolutionProblem& problem, const Trajectory& traj,
                                           const QuadratureRule& audit_quad, bool parallel) {
  if (problem.dim != traj.problem.dim)
    throw std::invalid_argument("energy_identity_residual: problem/trajectory dimension mismatch");
  if (traj.nodal_states.empty())
    throw std::invalid_argument("energy_identity_residual: trajectory has no states");
  const int N = static_cast<int>(traj.steps.size());
  EnergyAuditReport report;
  report.initial_energy = problem.energy(traj.nodal_states.front());
  report.records.resize(N);
  report.scheme_quad_order = traj.scheme_quad.order;
  report.audit_quad_order = audit_quad.order;
  report.newton_tolerance = traj.newton_tolerance;

  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int n = 1; n <= N; ++n) report.records[n - 1] = interval_record(problem, traj, n, audit_quad);
  } else {
    for (int n = 1; n <= N; ++n) report.records[n - 1] = interval_record(problem, traj, n, audit_quad);
  }

  double max_res = 0.0;
  for (const IntervalRecord& rec : report.records) max_res = std::max(max_res, std::abs(rec.identity_residual));
  report.max_abs_residual = max_res;

  if (problem.is_C_spd && !problem.has_source())
    report.monotonicity_violations = monotonicity_check(problem, traj);

  const int deg = balance_integrand_degree(problem.energy_poly_degree, traj.degree);
  const bool scheme_exact = deg >= 0 && deg <= 2 * traj.scheme_quad.order - 1;
  const bool audit_exact = deg >= 0 && deg <= 2 * audit_quad.order - 1;
  // A non-polynomial source cancels between the two sides of the balance only
  // when the audit reuses the scheme quadrature.
  const bool source_ok = !problem.has_source() || audit_quad.order == traj.scheme_quad.order;
  report.exact_integration = scheme_exact && audit_exact && source_ok;
  report.certified_bound_holds =
      report.exact_integration && report.max_abs_residual <= 10.0 * traj.newton_tolerance;
  return report;
}

std::vector<int> monotonicity_check(const EvolutionProblem& problem, const Trajectory& traj) {
  if (!problem.is_C_spd || problem.has_source())
    throw std::invalid_argument("monotonicity_check: requires an SPD structure operator and no source");
  if (traj.nodal_states.empty())
    throw std::invalid_argument("monotonicity_check: trajectory has no states");
  std::vector<int> violations;
  const double slack = 10.0 * traj.newton_tolerance;
  double prev = problem.energy(traj.nodal_states.front());
  for (size_t n = 1; n < traj.nodal_states.size(); ++n) {
    const double h = problem.energy(traj.nodal_states[n]);
    if (h > prev + slack) violations.push_back(static_cast<int>(n));
    prev = h;
  }
  return violations;
}

double constraint_drift(const Trajectory& traj, const std::function<Vec(const Vec&)>& g) {
  if (!g) throw std::invalid_argument("constraint_drift: missing constraint map");
  if (traj.nodal_states.empty()) throw std::invalid_argument("constraint_drift: empty trajectory");
  const Vec g0 = g(traj.nodal_states.front());
  double drift = 0.0;
  for (size_t n = 1; n < traj.nodal_states.size(); ++n) {
    const Vec gn = g(traj.nodal_states[n]);
    for (size_t i = 0; i < gn.size(); ++i) drift = std::max(drift, std::abs(gn[i] - g0[i]));
  }
  return drift;
}

ConvergenceTable convergence_study(const EvolutionProblem& problem, const Vec& u0, double T, int k,
                                   const QuadratureRule& quad, const std::vector<int>& N_list,
                                   const NewtonConfig& cfg, const Vec& reference_at_T) {
  for (size_t i = 1; i < N_list.size(); ++i)
    if (N_list[i] <= N_list[i - 1]) throw std::invalid_argument("convergence_study: N_list must increase");
  const int rows = static_cast<int>(N_list.size());
  ConvergenceTable table;
  table.rows.resize(rows);
  std::vector<std::string> errors(rows);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int i = 0; i < rows; ++i) {
    try {
      const TimeGrid grid = TimeGrid::uniform(0.0, T, N_list[i]);
      const Trajectory traj = integrate(problem, grid, u0, k, quad, cfg);
      Vec diff = traj.nodal_states.back();
      // Compare differential coordinates only; algebraic values have no
      // reference in a nodal end state.
      const std::vector<char> alg = problem.algebraic_lookup();
      for (int c = 0; c < problem.dim; ++c) diff[c] = alg[c] ? 0.0 : diff[c] - reference_at_T[c];
      ConvergenceRow row;
      row.N = N_list[i];
      row.tau = T / N_list[i];
      row.error = norm2(diff);
      row.error_sup = norm_inf(diff);
      table.rows[i] = row;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const std::string& e : errors)
    if (!e.empty()) throw std::runtime_error("convergence_study: " + e);

  for (int i = 1; i < rows; ++i) {
    const double e0 = table.rows[i - 1].error;
    const double e1 = table.rows[i].error;
    if (e0 > 0.0 && e1 > 0.0) {
      const double ratio = std::log(e0 / e1) / std::log(static_cast<double>(N_list[i]) / N_list[i - 1]);
      table.rows[i].observed_order = ratio;
      table.rows[i].has_order = true;
    }
  }
  return table;
}

ConvergenceTable convergence_study(const EvolutionProblem& problem, const Vec& u0, double T, int k,
                                   const QuadratureRule& quad, const std::vector<int>& N_list,
                                   const NewtonConfig& cfg, const std::function<Vec(double)>& closed_form) {
  if (!closed_form) throw std::invalid_argument("convergence_study: missing closed-form reference");
  return convergence_study(problem, u0, T, k, quad, N_list, cfg, closed_form(T));
}

Vec self_reference(const EvolutionProblem& problem, const Vec& u0, double T, int finest_N,
                   const NewtonConfig& cfg) {
  const TimeGrid grid = TimeGrid::uniform(0.0, T, 8 * finest_N);
  const Trajectory traj = integrate(problem, grid, u0, 3, gauss_legendre(6), cfg);
  return traj.nodal_states.back();
}

Mat matrix_exponential(const Mat& A) {
  if (A.rows != A.cols) throw std::invalid_argument("matrix_exponential: matrix not square");
  const int n = A.rows;
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += std::abs(A(i, j));
    norm = std::max(norm, row);
  }
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  Mat B = A;
  for (double& v : B.data) v *= scale;

  // Taylor series on the scaled matrix; with ||B|| <= 1/2 thirty terms are
  // far below round-off.
  Mat result = Mat::identity(n);
  Mat term = Mat::identity(n);
  for (int j = 1; j <= 30; ++j) {
    term = matmul(term, B);
    for (double& v : term.data) v /= j;
    for (size_t e = 0; e < result.data.size(); ++e) result.data[e] += term.data[e];
  }
  for (int s = 0; s < squarings; ++s) result = matmul(result, result);
  return result;
}

}  // namespace varstep::audit
