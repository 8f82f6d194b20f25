#include <doctest.h>

#include <cmath>

#include "varstep/audit.hpp"
#include "varstep/problems.hpp"
#include "varstep/timestepping.hpp"

using namespace varstep;

namespace {

// Shared type-invariant battery: linearity of the structure action, declared
// skewness / definiteness, and gradient consistency, on seeded samples.
void check_problem_invariants(const EvolutionProblem& p, uint64_t seed, int samples = 100) {
  Rng rng(seed);
  const int n = p.dim;
  for (int trial = 0; trial < samples; ++trial) {
    Vec u(n), v(n), w(n);
    for (double& x : u) x = rng.gaussian();
    for (double& x : v) x = rng.gaussian();
    for (double& x : w) x = rng.gaussian();
    const double a = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-2.0, 2.0);

    Vec combo(n);
    for (int i = 0; i < n; ++i) combo[i] = a * v[i] + b * w[i];
    const Vec lhs = p.structure_apply(u, combo);
    const Vec cv = p.structure_apply(u, v);
    const Vec cw = p.structure_apply(u, w);
    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(lhs[i]));
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(lhs[i] - (a * cv[i] + b * cw[i])) <= 1e-12 * scale);

    if (p.is_C_skew)
      CHECK(std::abs(dot(p.structure_apply(u, v), v)) <= 1e-12 * (1.0 + dot(v, v)));
    if (p.is_C_spd) CHECK(dot(p.structure_apply(u, v), v) >= 0.0);

    if (p.structure_matrix) {
      const Vec via_matrix = matvec(p.structure_matrix(u), v);
      for (int i = 0; i < n; ++i)
        CHECK(std::abs(via_matrix[i] - cv[i]) <= 1e-12 * (1.0 + std::abs(cv[i])));
    }
  }
  for (int trial = 0; trial < samples; ++trial) {
    Vec u(n);
    for (double& x : u) x = rng.gaussian();
    const double nrm = norm2(u);
    if (nrm > 0)
      for (double& x : u) x /= nrm;
    CHECK(check_gradient_consistency(p, u, 1e-5) <= 1e-6);
  }
}

void check_closed_form(const problems::ProblemBundle& bundle, uint64_t seed) {
  REQUIRE(bundle.solution);
  Rng rng(seed);
  const double h = 1e-6;
  for (int trial = 0; trial < 12; ++trial) {
    const double t = rng.uniform(0.0, 3.0);
    const Vec u = bundle.solution(t);
    const Vec up = bundle.solution(t + h);
    const Vec um = bundle.solution(t - h);
    Vec udot(u.size());
    for (size_t i = 0; i < u.size(); ++i) udot[i] = (up[i] - um[i]) / (2.0 * h);
    CHECK(norm_inf(residual(bundle.problem, t, u, udot)) <= 1e-8);
  }
}

}  // namespace

TEST_CASE("harmonic oscillator: closed form, conservation, invariants") {
  const auto bundle = problems::harmonic_oscillator(0.0, 1.0);
  check_problem_invariants(bundle.problem, 100);
  check_closed_form(bundle, 101);
  const Vec quarter = bundle.solution(1.5707963267948966);
  CHECK(quarter[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(quarter[1] == doctest::Approx(0.0).epsilon(1e-12));
  for (double t : {0.3, 1.1, 2.9})
    CHECK(bundle.problem.energy(bundle.solution(t)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("nonlinear pendulum: fixed point, small-angle period, invariants") {
  const auto bundle = problems::nonlinear_pendulum(0.0, 0.1);
  check_problem_invariants(bundle.problem, 102);

  NewtonConfig cfg;
  {
    const auto still = problems::nonlinear_pendulum(0.0, 0.0);
    const Trajectory traj = integrate(still.problem, TimeGrid::uniform(0.0, 2.0, 20), {0.0, 0.0}, 1,
                                      gauss_legendre(2), cfg);
    for (const Vec& u : traj.nodal_states) CHECK(norm_inf(u) <= 1e-12);
  }
  {
    // q(t) ~ 0.1 cos(t): measure the period from three zero crossings of q.
    const Trajectory traj = integrate(bundle.problem, TimeGrid::uniform(0.0, 8.0, 800),
                                      bundle.initial_state, 1, gauss_legendre(3), cfg);
    std::vector<double> crossings;
    for (size_t n = 1; n < traj.nodal_states.size(); ++n) {
      const double a = traj.nodal_states[n - 1][1];
      const double b = traj.nodal_states[n][1];
      if (a == 0.0 || a * b >= 0.0) continue;
      const double t0 = traj.grid.nodes[n - 1];
      const double t1 = traj.grid.nodes[n];
      crossings.push_back(t0 + (t1 - t0) * a / (a - b));
    }
    REQUIRE(crossings.size() >= 3);
    const double period = crossings[2] - crossings[0];
    CHECK(std::abs(period - 6.283185307179586) / 6.283185307179586 <= 0.01);
  }
  {
    // overintegrated energy drift over T = 10
    const Trajectory traj = integrate(bundle.problem, TimeGrid::uniform(0.0, 10.0, 200),
                                      bundle.initial_state, 1, gauss_legendre(6), cfg);
    const double h0 = bundle.problem.energy(traj.nodal_states.front());
    for (const Vec& u : traj.nodal_states)
      CHECK(std::abs(bundle.problem.energy(u) - h0) <= 1e-9);
  }
}

TEST_CASE("quadratic gradient flow: closed form and monotone decay") {
  Mat A = Mat::identity(3);
  A(0, 1) = A(1, 0) = 0.2;
  const auto bundle = problems::quadratic_gradient_flow(A, {1.0, 1.0, 1.0});
  check_problem_invariants(bundle.problem, 103);
  check_closed_form(bundle, 104);
  {
    Mat I2 = Mat::identity(2);
    const auto simple = problems::quadratic_gradient_flow(I2, {1.0, 1.0});
    const Vec u = simple.solution(1.0);
    CHECK(u[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(u[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
  NewtonConfig cfg;
  const Trajectory traj = integrate(bundle.problem, TimeGrid::uniform(0.0, 6.0, 60),
                                    bundle.initial_state, 1, gauss_legendre(2), cfg);
  CHECK(audit::monotonicity_check(bundle.problem, traj).empty());
  CHECK(norm2(traj.nodal_states.back()) < 0.01 * norm2(bundle.initial_state));

  Mat bad(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(problems::quadratic_gradient_flow(bad, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("double well: fixed points and dissipation") {
  const auto bundle = problems::double_well_gradient_flow(6, 11);
  check_problem_invariants(bundle.problem, 105);
  NewtonConfig cfg;
  {
    const Vec ones(6, 1.0);
    CHECK(norm_inf(bundle.problem.energy_gradient(ones)) == 0.0);
    const StepSolution s = step(bundle.problem, 0.0, 0.5, ones, 1, gauss_legendre(4), cfg);
    for (double v : s.u_end) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  const Trajectory traj = integrate(bundle.problem, TimeGrid::uniform(0.0, 30.0, 300),
                                    bundle.initial_state, 1, gauss_legendre(4), cfg);
  CHECK(audit::monotonicity_check(bundle.problem, traj).empty());
  for (double v : traj.nodal_states.back()) CHECK(std::abs(std::abs(v) - 1.0) <= 1e-3);
  const auto report = audit::energy_identity_residual(bundle.problem, traj, gauss_legendre(4));
  CHECK(report.max_abs_residual <= 1e-10);
}

TEST_CASE("constrained pendulum: consistency checks and multiplier oracle") {
  CHECK_THROWS_AS(problems::constrained_pendulum(1.0, {0.5, 0.0}, {0.0, -1.1}), std::invalid_argument);
  CHECK_THROWS_AS(problems::constrained_pendulum(1.0, {0.5, 0.5}, {0.0, -1.0}), std::invalid_argument);

  const double gravity = 1.0;
  const auto bundle = problems::constrained_pendulum(gravity);
  check_problem_invariants(bundle.problem, 110);
  const Vec& u0 = bundle.initial_state;
  CHECK(bundle.constraint(u0)[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(u0[2] * u0[0] + u0[3] * u0[1] == doctest::Approx(0.0).epsilon(1e-14));

  // Along the exact motion the multiplier equals |p|^2 - gravity*q_2. The
  // discrete multiplier converges to it at second order for k = 1; check the
  // error at T/2 on three refinements.
  NewtonConfig cfg;
  const double T = 5.0;
  double prev_err = -1.0;
  for (int N : {100, 200, 400}) {
    const Trajectory traj = integrate(bundle.problem, TimeGrid::uniform(0.0, T, N),
                                      bundle.initial_state, 1, gauss_legendre(3), cfg);
    const Vec u = evaluate(traj, T / 2);
    const double analytic = (u[0] * u[0] + u[1] * u[1]) - gravity * u[3];
    const double err = std::abs(u[4] - analytic);
    if (prev_err >= 0.0) CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err <= 1e-3);
}

TEST_CASE("cahn-hilliard: mass affine, SPD operator, energy decay") {
  const double mean = 0.2;
  const auto bundle = problems::cahn_hilliard_1d(16, 0.02, 1.0, mean, 9, 0.1);
  check_problem_invariants(bundle.problem, 106);
  CHECK_THROWS_AS(problems::cahn_hilliard_1d(2, 0.01, 1.0, 0.0), std::invalid_argument);

  Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    Vec y(bundle.problem.dim);
    for (double& v : y) v = rng.gaussian();
    // reconstruction has the prescribed mean
    const Vec u = bundle.reconstruct(y);
    double sum = 0.0;
    for (double v : u) sum += v;
    CHECK(sum / u.size() == doctest::Approx(mean).epsilon(1e-12));
    // SPD action on the subspace
    if (norm2(y) > 0) CHECK(dot(bundle.problem.structure_apply(y, y), y) > 0.0);
  }

  NewtonConfig cfg;
  const Trajectory traj = integrate(bundle.problem, TimeGrid::uniform(0.0, 1.0, 20),
                                    bundle.initial_state, 1, gauss_legendre(4), cfg);
  CHECK(audit::monotonicity_check(bundle.problem, traj).empty());
  const auto report = audit::energy_identity_residual(bundle.problem, traj, gauss_legendre(4));
  CHECK(report.max_abs_residual <= 1e-10);
  CHECK(report.exact_integration);
}

TEST_CASE("magnetoquasistatics: eddy decay and source-driven balance") {
  CHECK_THROWS_AS(problems::magnetoquasistatics_1d(8, 0.0, 1.0, 0.0, nullptr), std::invalid_argument);
  NewtonConfig cfg;
  {
    // no source: strict decay toward zero field
    const auto bundle = problems::magnetoquasistatics_1d(16, 1.0, 1.0, 0.5, nullptr);
    check_problem_invariants(bundle.problem, 107);
    const Trajectory traj = integrate(bundle.problem, TimeGrid::uniform(0.0, 0.5, 50),
                                      bundle.initial_state, 1, gauss_legendre(4), cfg);
    double prev = bundle.problem.energy(traj.nodal_states.front());
    CHECK(prev > 0.0);
    for (size_t n = 1; n < traj.nodal_states.size(); ++n) {
      const double h = bundle.problem.energy(traj.nodal_states[n]);
      CHECK(h < prev);
      prev = h;
    }
    CHECK(prev < 0.05 * bundle.problem.energy(traj.nodal_states.front()));
  }
  {
    // linear material with a sinusoidal source: balance closes at m = k+2
    const int n = 12;
    const double h = 1.0 / (n + 1);
    const auto source = [n, h](double t) {
      Vec j(n);
      for (int i = 0; i < n; ++i) {
        const double x = (i + 1) * h;
        j[i] = std::sin(6.283185307179586 * t) * std::exp(-50.0 * (x - 0.5) * (x - 0.5));
      }
      return j;
    };
    const auto bundle = problems::magnetoquasistatics_1d(n, 1.0, 1.0, 0.0, source);
    const Trajectory traj = integrate(bundle.problem, TimeGrid::uniform(0.0, 2.0, 100),
                                      bundle.initial_state, 1, gauss_legendre(3), cfg);
    const auto report = audit::energy_identity_residual(bundle.problem, traj, gauss_legendre(3));
    CHECK(report.max_abs_residual <= 1e-9);
    CHECK(report.exact_integration);  // same quadrature on both sides
  }
  {
    // nonlinear material: quartic density integrates exactly at m = 4, k = 1
    const auto bundle = problems::magnetoquasistatics_1d(12, 1.0, 1.0, 1.0, nullptr);
    const Trajectory traj = integrate(bundle.problem, TimeGrid::uniform(0.0, 0.5, 50),
                                      bundle.initial_state, 1, gauss_legendre(4), cfg);
    const auto report = audit::energy_identity_residual(bundle.problem, traj, gauss_legendre(4));
    CHECK(report.max_abs_residual <= 1e-10);
  }
}

TEST_CASE("skew quadratic system: invariants and closed form") {
  const auto bundle = problems::skew_quadratic_system(10, 3);
  check_problem_invariants(bundle.problem, 108);
  check_closed_form(bundle, 109);
  CHECK_THROWS_AS(problems::skew_quadratic_system(7, 3), std::invalid_argument);
}

TEST_CASE("recommended quadrature orders: sufficient, and sharp for the quartic flow") {
  NewtonConfig cfg;
  const auto certified = [&](const problems::ProblemBundle& bundle, int k, int m, double T, int N) {
    const Trajectory traj = integrate(bundle.problem, TimeGrid::uniform(0.0, T, N),
                                      bundle.initial_state, k, gauss_legendre(m), cfg);
    return audit::energy_identity_residual(bundle.problem, traj, gauss_legendre(m));
  };
  for (int k : {0, 1}) {
    const auto ho = problems::harmonic_oscillator(0.3, 0.8);
    CHECK(certified(ho, k, ho.recommended_quadrature_order(k), 1.5, 15).certified_bound_holds);
    const auto dw = problems::double_well_gradient_flow(6, 31, 1.2);
    CHECK(certified(dw, k, dw.recommended_quadrature_order(k), 1.5, 15).certified_bound_holds);
    const auto mq = problems::magnetoquasistatics_1d(10, 1.0, 1.0, 1.0, nullptr);
    CHECK(certified(mq, k, mq.recommended_quadrature_order(k), 1.5, 15).certified_bound_holds);
    {
      Mat A = Mat::identity(3);
      A(0, 1) = A(1, 0) = 0.25;
      const auto qf = problems::quadratic_gradient_flow(A, {1.0, -0.5, 0.2});
      CHECK(certified(qf, k, qf.recommended_quadrature_order(k), 1.5, 15).certified_bound_holds);
    }
    const auto ch = problems::cahn_hilliard_1d(12, 0.05, 1.0, 0.0, 3, 0.2);
    CHECK(certified(ch, k, ch.recommended_quadrature_order(k), 1.0, 10).certified_bound_holds);
    const auto cp = problems::constrained_pendulum(1.0);
    CHECK(certified(cp, k, cp.recommended_quadrature_order(k), 1.0, 20).certified_bound_holds);
    const auto sk = problems::skew_quadratic_system(6, 4);
    CHECK(certified(sk, k, sk.recommended_quadrature_order(k), 1.5, 15).certified_bound_holds);
    // non-polynomial energy: the certification is not claimed
    const auto np = problems::nonlinear_pendulum(0.0, 1.0);
    CHECK_FALSE(certified(np, k, np.recommended_quadrature_order(k), 1.5, 15).exact_integration);
  }
  // One order lower measurably breaks the quartic balance. Coarse steps and a
  // start far up the well keep the degree-7 quadrature error visible.
  const auto dw = problems::double_well_gradient_flow(6, 31, 1.8);
  const auto under = certified(dw, 1, dw.recommended_quadrature_order(1) - 1, 2.0, 4);
  CHECK_FALSE(under.exact_integration);
  CHECK(under.max_abs_residual > 10.0 * cfg.tolerance);
}

TEST_CASE("problem registry: names, defaults, rejection") {
  const auto ho = problems::make_problem("harmonic_oscillator", {}, 0);
  CHECK(ho.problem.dim == 2);
  const auto ch = problems::make_problem("cahn_hilliard", {{"n", "16"}}, 1);
  CHECK(ch.problem.dim == 15);
  CHECK_THROWS_AS(problems::make_problem("unknown_problem", {}, 0), std::invalid_argument);
  CHECK_THROWS_AS(problems::make_problem("harmonic_oscillator", {{"bogus", "1"}}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(problems::make_problem("double_well", {{"n", "2.5"}}, 0), std::invalid_argument);
}
