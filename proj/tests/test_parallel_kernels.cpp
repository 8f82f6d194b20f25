#include <doctest.h>

#include <cmath>
#include <thread>

#include "varstep/audit.hpp"
#include "varstep/newton.hpp"
#include "varstep/problems.hpp"
#include "varstep/timestepping.hpp"

using namespace varstep;

TEST_CASE("fd jacobian: serial and parallel kernels agree bitwise") {
  const auto bundle = problems::double_well_gradient_flow(40, 8, 0.9);
  const EvolutionProblem& p = bundle.problem;
  const ResidualFn fn = [&p](const Vec& x) {
    Vec g = p.energy_gradient(x);
    for (size_t i = 0; i < g.size(); ++i) g[i] += 0.3 * x[i];
    return g;
  };
  Vec x(p.dim);
  Rng rng(6);
  for (double& v : x) v = rng.gaussian();
  const Vec f0 = fn(x);
  Mat js, jp;
  fd_jacobian_serial(fn, x, f0, 1e-7, js);
  fd_jacobian_parallel(fn, x, f0, 1e-7, jp);
  REQUIRE(js.data.size() == jp.data.size());
  for (size_t i = 0; i < js.data.size(); ++i) CHECK(js.data[i] == jp.data[i]);
}

TEST_CASE("energy audit: serial and parallel interval scans agree bitwise") {
  const auto bundle = problems::nonlinear_pendulum(0.0, 1.0);
  NewtonConfig cfg;
  const Trajectory traj = integrate(bundle.problem, TimeGrid::uniform(0.0, 20.0, 400),
                                    bundle.initial_state, 1, gauss_legendre(3), cfg);
  const auto serial = audit::energy_identity_residual(bundle.problem, traj, gauss_legendre(8), false);
  const auto parallel = audit::energy_identity_residual(bundle.problem, traj, gauss_legendre(8), true);
  REQUIRE(serial.records.size() == parallel.records.size());
  for (size_t i = 0; i < serial.records.size(); ++i) {
    CHECK(serial.records[i].energy == parallel.records[i].energy);
    CHECK(serial.records[i].work_integral == parallel.records[i].work_integral);
    CHECK(serial.records[i].dissipation_integral == parallel.records[i].dissipation_integral);
    CHECK(serial.records[i].identity_residual == parallel.records[i].identity_residual);
  }
  CHECK(serial.max_abs_residual == parallel.max_abs_residual);
}

TEST_CASE("newton: parallel and serial fd paths produce the same solve") {
  // The phase-separation operator shares one factorization across threads;
  // forcing finite differences drives it from concurrent Jacobian columns.
  const auto bundle = problems::cahn_hilliard_1d(20, 0.05, 1.0, 0.1, 15, 0.2);
  NewtonConfig par;
  par.parallel_fd = true;
  par.jacobian = JacobianMode::finite_difference;
  NewtonConfig ser = par;
  ser.parallel_fd = false;
  const StepSolution a = step(bundle.problem, 0.0, 0.1, bundle.initial_state, 1, gauss_legendre(4), par);
  const StepSolution b = step(bundle.problem, 0.0, 0.1, bundle.initial_state, 1, gauss_legendre(4), ser);
  for (int i = 0; i < bundle.problem.dim; ++i) CHECK(a.u_end[i] == b.u_end[i]);
}

TEST_CASE("concurrent integrations share no mutable state") {
  const auto bundle = problems::nonlinear_pendulum(0.0, 1.1);
  NewtonConfig cfg;
  const auto run_once = [&]() {
    return integrate(bundle.problem, TimeGrid::uniform(0.0, 5.0, 100), bundle.initial_state, 1,
                     gauss_legendre(2), cfg);
  };
  const Trajectory reference = run_once();
  Trajectory t1, t2;
  std::thread a([&] { t1 = run_once(); });
  std::thread b([&] { t2 = run_once(); });
  a.join();
  b.join();
  for (size_t n = 0; n < reference.nodal_states.size(); ++n)
    for (int i = 0; i < 2; ++i) {
      CHECK(t1.nodal_states[n][i] == reference.nodal_states[n][i]);
      CHECK(t2.nodal_states[n][i] == reference.nodal_states[n][i]);
    }
}

TEST_CASE("convergence rows computed concurrently assemble deterministically") {
  Mat A = Mat::identity(2);
  A(0, 1) = A(1, 0) = 0.3;
  const auto bundle = problems::quadratic_gradient_flow(A, {1.0, -0.7});
  NewtonConfig cfg;
  const auto t1 = audit::convergence_study(bundle.problem, bundle.initial_state, 1.0, 1,
                                           gauss_legendre(2), {10, 20, 40, 80}, cfg, bundle.solution);
  const auto t2 = audit::convergence_study(bundle.problem, bundle.initial_state, 1.0, 1,
                                           gauss_legendre(2), {10, 20, 40, 80}, cfg, bundle.solution);
  REQUIRE(t1.rows.size() == t2.rows.size());
  for (size_t i = 0; i < t1.rows.size(); ++i) {
    CHECK(t1.rows[i].error == t2.rows[i].error);
    CHECK(t1.rows[i].N == t2.rows[i].N);
  }
}
