#include "varstep/timestepping.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace varstep {

TimeGrid TimeGrid::uniform(double t0, double t1, int steps) {
  if (steps < 1) throw std::invalid_argument("TimeGrid::uniform: need at least one step");
  if (!(t1 > t0)) throw std::invalid_argument("TimeGrid::uniform: end must exceed start");
  TimeGrid g;
  g.nodes.resize(steps + 1);
  for (int i = 0; i <= steps; ++i) g.nodes[i] = t0 + (t1 - t0) * (static_cast<double>(i) / steps);
  g.nodes.back() = t1;
  return g;
}

void TimeGrid::validate() const {
  if (nodes.size() < 2) throw std::invalid_argument("TimeGrid: need at least one step");
  for (size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1])) throw std::invalid_argument("TimeGrid: nodes must be strictly increasing");
}

namespace {

// Per-(k, quadrature) geometry shared by every step of an integration.
struct StepBasis {
  int k = 0;
  std::vector<double> c;   // k+1 parameter nodes
  QuadratureRule quad;
  Mat test_at_q;  // (m x k+1): l_j(gamma_q)
  Mat int_at_q;   // (m x k+1): integral of l_j over [0, gamma_q]
  Mat der_at_q;   // (m x k+1): l_j'(gamma_q)
};

StepBasis make_step_basis(int k, const QuadratureRule& quad) {
  if (k < 0) throw std::invalid_argument("step: polynomial degree parameter k must be >= 0");
  if (quad.order < k + 1)
    throw std::invalid_argument("step: quadrature order below k+1 leaves the test pairing under-determined");
  StepBasis sb;
  sb.k = k;
  sb.c = gauss_legendre(k + 1).nodes;
  sb.quad = quad;
  const int m = quad.order;
  sb.test_at_q = Mat(m, k + 1);
  sb.int_at_q = Mat(m, k + 1);
  sb.der_at_q = Mat(m, k + 1);
  for (int q = 0; q < m; ++q) {
    const double s = quad.nodes[q];
    for (int j = 0; j <= k; ++j) {
      sb.test_at_q(q, j) = lagrange_eval(sb.c, j, s);
      sb.int_at_q(q, j) = lagrange_integral(sb.c, j, s);
      sb.der_at_q(q, j) = lagrange_deriv(sb.c, j, s);
    }
  }
  return sb;
}

// Assembly of the stacked per-step residual and (optionally) its exact
// Jacobian from the problem's derivative blocks.
struct StepAssembly {
  const EvolutionProblem& p;
  const StepBasis& sb;
  double t_start;
  double tau;
  const Vec& u_start;
  std::vector<char> alg;

  StepAssembly(const EvolutionProblem& prob, const StepBasis& basis, double t0, double dt, const Vec& u0)
      : p(prob), sb(basis), t_start(t0), tau(dt), u_start(u0), alg(prob.algebraic_lookup()) {}

  int blocks() const { return sb.k + 1; }
  int size() const { return blocks() * p.dim; }

  void state_at_node(const Vec& x, int q, Vec& u, Vec& udot) const {
    const int n = p.dim;
    u = u_start;
    udot.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
      if (alg[i]) u[i] = 0.0;
    for (int j = 0; j < blocks(); ++j) {
      const double lv = sb.test_at_q(q, j);
      const double li = sb.int_at_q(q, j);
      const double ld = sb.der_at_q(q, j);
      const double* xj = &x[static_cast<size_t>(j) * n];
      for (int i = 0; i < n; ++i) {
        if (alg[i]) {
          u[i] += lv * xj[i];
          udot[i] += (ld / tau) * xj[i];
        } else {
          u[i] += tau * li * xj[i];
          udot[i] += lv * xj[i];
        }
      }
    }
  }

  Vec residual(const Vec& x) const {
    const int n = p.dim;
    Vec out(size(), 0.0);
    Vec u, udot;
    for (int q = 0; q < sb.quad.order; ++q) {
      state_at_node(x, q, u, udot);
      const double tq = t_start + sb.quad.nodes[q] * tau;
      Vec r = p.structure_apply(u, udot);
      const Vec g = p.energy_gradient(u);
      for (int i = 0; i < n; ++i) r[i] += g[i];
      if (p.has_source()) {
        const Vec f = p.source(tq, u);
        for (int i = 0; i < n; ++i) r[i] -= f[i];
      }
      for (int b = 0; b < blocks(); ++b) {
        const double coef = tau * sb.quad.weights[q] * sb.test_at_q(q, b);
        if (coef == 0.0) continue;
        double* ob = &out[static_cast<size_t>(b) * n];
        for (int i = 0; i < n; ++i) ob[i] += coef * r[i];
      }
    }
    return out;
  }

  bool exact_jacobian_available() const {
    if (!p.structure_matrix || !p.energy_hessian) return false;
    if (!p.is_C_constant && !p.structure_apply_jacobian) return false;
    if (p.has_source() && !p.source_jacobian) return false;
    return true;
  }

  Mat exact_jacobian(const Vec& x) const {
    const int n = p.dim;
    Mat jac(size(), size());
    Vec u, udot, ucol(n), wcol(n);
    for (int q = 0; q < sb.quad.order; ++q) {
      state_at_node(x, q, u, udot);
      const double tq = t_start + sb.quad.nodes[q] * tau;
      const Mat cmat = p.structure_matrix(u);
      Mat amat = p.energy_hessian(u);
      if (!p.is_C_constant) {
        const Mat dc = p.structure_apply_jacobian(u, udot);
        for (size_t e = 0; e < amat.data.size(); ++e) amat.data[e] += dc.data[e];
      }
      if (p.has_source()) {
        const Mat df = p.source_jacobian(tq, u);
        for (size_t e = 0; e < amat.data.size(); ++e) amat.data[e] -= df.data[e];
      }
      for (int j = 0; j < blocks(); ++j) {
        // Sensitivity of u(t_q) and du/dt(t_q) to coefficient block j.
        for (int i = 0; i < n; ++i) {
          if (alg[i]) {
            ucol[i] = sb.test_at_q(q, j);
            wcol[i] = sb.der_at_q(q, j) / tau;
          } else {
            ucol[i] = tau * sb.int_at_q(q, j);
            wcol[i] = sb.test_at_q(q, j);
          }
        }
        for (int b = 0; b < blocks(); ++b) {
          const double coef = tau * sb.quad.weights[q] * sb.test_at_q(q, b);
          if (coef == 0.0) continue;
          for (int r = 0; r < n; ++r) {
            double* jrow = &jac.data[static_cast<size_t>(b * n + r) * jac.cols + static_cast<size_t>(j) * n];
            const double* arow = &amat.data[static_cast<size_t>(r) * n];
            const double* crow = &cmat.data[static_cast<size_t>(r) * n];
            for (int cix = 0; cix < n; ++cix)
              jrow[cix] += coef * (arow[cix] * ucol[cix] + crow[cix] * wcol[cix]);
          }
        }
      }
    }
    return jac;
  }
};

StepSolution build_solution(const StepAssembly& asmbl, const Vec& x) {
  StepSolution sol;
  sol.t_start = asmbl.t_start;
  sol.tau = asmbl.tau;
  sol.degree = asmbl.sb.k;
  sol.param_nodes = asmbl.sb.c;
  sol.algebraic = asmbl.alg;
  sol.u_start = asmbl.u_start;
  sol.coeffs.resize(asmbl.blocks());
  const int n = asmbl.p.dim;
  for (int j = 0; j < asmbl.blocks(); ++j)
    sol.coeffs[j] = Vec(x.begin() + static_cast<size_t>(j) * n, x.begin() + static_cast<size_t>(j + 1) * n);
  sol.u_end = step_state_at(sol, 1.0);
  return sol;
}

}  // namespace

Vec step_state_at(const StepSolution& step, double s) {
  const int n = static_cast<int>(step.u_start.size());
  Vec u = step.u_start;
  for (int i = 0; i < n; ++i)
    if (step.algebraic[i]) u[i] = 0.0;
  for (size_t j = 0; j < step.coeffs.size(); ++j) {
    const double lv = lagrange_eval(step.param_nodes, static_cast<int>(j), s);
    const double li = lagrange_integral(step.param_nodes, static_cast<int>(j), s);
    const Vec& xj = step.coeffs[j];
    for (int i = 0; i < n; ++i) {
      if (step.algebraic[i])
        u[i] += lv * xj[i];
      else
        u[i] += step.tau * li * xj[i];
    }
  }
  return u;
}

Vec step_derivative_at(const StepSolution& step, double s) {
  const int n = static_cast<int>(step.u_start.size());
  Vec udot(n, 0.0);
  for (size_t j = 0; j < step.coeffs.size(); ++j) {
    const double lv = lagrange_eval(step.param_nodes, static_cast<int>(j), s);
    const double ld = lagrange_deriv(step.param_nodes, static_cast<int>(j), s);
    const Vec& xj = step.coeffs[j];
    for (int i = 0; i < n; ++i) {
      if (step.algebraic[i])
        udot[i] += (ld / step.tau) * xj[i];
      else
        udot[i] += lv * xj[i];
    }
  }
  return udot;
}

Vec step_residual(const EvolutionProblem& problem, const StepSolution& step, double t_start,
                  double tau, const QuadratureRule& quad) {
  if (static_cast<int>(step.u_start.size()) != problem.dim)
    throw std::invalid_argument("step_residual: state dimension mismatch");
  const StepBasis sb = make_step_basis(step.degree, quad);
  StepAssembly asmbl(problem, sb, t_start, tau, step.u_start);
  Vec x(static_cast<size_t>(asmbl.blocks()) * problem.dim);
  for (int j = 0; j < asmbl.blocks(); ++j)
    std::copy(step.coeffs[j].begin(), step.coeffs[j].end(), x.begin() + static_cast<size_t>(j) * problem.dim);
  return asmbl.residual(x);
}

StepSolution step(const EvolutionProblem& problem, double t_start, double tau, const Vec& u_start,
                  int k, const QuadratureRule& quad, const NewtonConfig& cfg,
                  const StepSolution* predict_from) {
  if (static_cast<int>(u_start.size()) != problem.dim)
    throw std::invalid_argument("step: state dimension mismatch");
  if (!(tau > 0.0)) throw std::invalid_argument("step: step size must be positive");
  const StepBasis sb = make_step_basis(k, quad);
  StepAssembly asmbl(problem, sb, t_start, tau, u_start);

  Vec guess(asmbl.size(), 0.0);
  if (predict_from) {
    for (int j = 0; j <= k; ++j) {
      const double t_node = t_start + sb.c[j] * tau;
      const double s_prev = (t_node - predict_from->t_start) / predict_from->tau;
      const Vec ud = step_derivative_at(*predict_from, s_prev);
      const Vec us = step_state_at(*predict_from, s_prev);
      for (int i = 0; i < problem.dim; ++i)
        guess[static_cast<size_t>(j) * problem.dim + i] = asmbl.alg[i] ? us[i] : ud[i];
    }
  }

  const ResidualFn fn = [&asmbl](const Vec& x) { return asmbl.residual(x); };
  JacobianFn jac;
  if (cfg.jacobian != JacobianMode::finite_difference && asmbl.exact_jacobian_available())
    jac = [&asmbl](const Vec& x) { return asmbl.exact_jacobian(x); };
  if (cfg.jacobian == JacobianMode::supplied && !jac)
    throw std::invalid_argument("step: supplied-Jacobian mode but the problem lacks derivative blocks");

  NewtonResult nr = newton_solve(fn, std::move(guess), cfg, jac);
  if (!nr.ok()) {
    const std::string why = nr.status == NewtonStatus::singular_jacobian ? "singular Jacobian" : "no convergence";
    throw StepFailure("step at t=" + std::to_string(t_start) + ": " + why +
                          " (residual " + std::to_string(nr.residual_norm) + " after " +
                          std::to_string(nr.iterations) + " iterations)",
                      std::move(nr));
  }
  return build_solution(asmbl, nr.x);
}

Trajectory integrate(const EvolutionProblem& problem, const TimeGrid& grid, const Vec& u0, int k,
                     const QuadratureRule& quad, const NewtonConfig& cfg,
                     bool extrapolate_predictor) {
  grid.validate();
  if (static_cast<int>(u0.size()) != problem.dim)
    throw std::invalid_argument("integrate: initial state dimension mismatch");

  Trajectory traj;
  traj.problem = problem;
  traj.grid = grid;
  traj.degree = k;
  traj.scheme_quad = quad;
  traj.newton_tolerance = cfg.tolerance;
  traj.nodal_states.push_back(u0);

  Vec u = u0;
  for (int n = 1; n <= grid.steps(); ++n) {
    const double t0 = grid.nodes[n - 1];
    const double tau = grid.step_size(n - 1);
    const StepSolution* predictor =
        (extrapolate_predictor && !traj.steps.empty()) ? &traj.steps.back() : nullptr;
    try {
      traj.steps.push_back(step(problem, t0, tau, u, k, quad, cfg, predictor));
    } catch (const StepFailure& sf) {
      throw IntegrateFailure("integrate: step " + std::to_string(n) + " failed: " + sf.what(),
                             std::move(traj), n);
    }
    u = traj.steps.back().u_end;
    traj.nodal_states.push_back(u);
  }
  // Algebraic coordinates carry no initial value; report their right-limit at t_0.
  if (!problem.algebraic_mask.empty() && !traj.steps.empty()) {
    const Vec at0 = step_state_at(traj.steps.front(), 0.0);
    for (int i : problem.algebraic_mask) traj.nodal_states.front()[i] = at0[i];
  }
  return traj;
}

Vec discrete_gradient_step(const EvolutionProblem& problem, double t_start, double tau,
                           const Vec& u_start, const QuadratureRule& quad, const NewtonConfig& cfg) {
  if (static_cast<int>(u_start.size()) != problem.dim)
    throw std::invalid_argument("discrete_gradient_step: state dimension mismatch");
  if (!(tau > 0.0)) throw std::invalid_argument("discrete_gradient_step: step size must be positive");
  const int n = problem.dim;
  const std::vector<char> alg = problem.algebraic_lookup();

  const ResidualFn fn = [&](const Vec& u_next) {
    Vec out(n, 0.0);
    Vec u(n), d(n);
    for (int i = 0; i < n; ++i) d[i] = alg[i] ? 0.0 : (u_next[i] - u_start[i]) / tau;
    for (int q = 0; q < quad.order; ++q) {
      const double s = quad.nodes[q];
      const double w = quad.weights[q];
      const double tq = t_start + s * tau;
      for (int i = 0; i < n; ++i) u[i] = alg[i] ? u_next[i] : u_start[i] + s * (u_next[i] - u_start[i]);
      Vec r = problem.structure_apply(u, d);
      const Vec g = problem.energy_gradient(u);
      for (int i = 0; i < n; ++i) r[i] += g[i];
      if (problem.has_source()) {
        const Vec f = problem.source(tq, u);
        for (int i = 0; i < n; ++i) r[i] -= f[i];
      }
      for (int i = 0; i < n; ++i) out[i] += tau * w * r[i];
    }
    return out;
  };

  NewtonConfig local = cfg;
  local.jacobian = JacobianMode::finite_difference;
  NewtonResult nr = newton_solve(fn, u_start, local);
  if (!nr.ok()) {
    throw StepFailure("discrete_gradient_step at t=" + std::to_string(t_start) +
                          ": no convergence (residual " + std::to_string(nr.residual_norm) + ")",
                      std::move(nr));
  }
  return nr.x;
}

Vec evaluate(const Trajectory& traj, double t) {
  if (traj.steps.empty()) throw std::invalid_argument("evaluate: empty trajectory");
  const auto& nodes = traj.grid.nodes;
  if (t < nodes.front() || t > nodes.back())
    throw std::invalid_argument("evaluate: time outside the grid");
  // Right-continuous lookup: an interior node belongs to the step that starts
  // there, so algebraic coordinates get their right-limit.
  int n = static_cast<int>(std::upper_bound(nodes.begin(), nodes.end(), t) - nodes.begin()) - 1;
  n = std::min(n, static_cast<int>(traj.steps.size()) - 1);
  const StepSolution& stp = traj.steps[n];
  const double s = (t - stp.t_start) / stp.tau;
  return step_state_at(stp, s);
}

}  // namespace varstep
