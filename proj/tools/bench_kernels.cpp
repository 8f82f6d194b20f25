// Timings for the OpenMP kernels against their serial references:
// finite-difference Jacobian assembly and the per-interval energy audit.
#include <chrono>
#include <cstdio>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "varstep/audit.hpp"
#include "varstep/newton.hpp"
#include "varstep/problems.hpp"
#include "varstep/timestepping.hpp"

using namespace varstep;

namespace {

double seconds(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

void bench_fd_jacobian() {
  const auto bundle = problems::double_well_gradient_flow(600, 42, 0.5);
  const EvolutionProblem& p = bundle.problem;
  const QuadratureRule quad = gauss_legendre(2);
  // Stacked step residual at k=1: 1200 unknowns, each column one evaluation.
  StepSolution seed;
  seed.t_start = 0.0;
  seed.tau = 0.05;
  seed.degree = 1;
  seed.param_nodes = gauss_legendre(2).nodes;
  seed.algebraic.assign(p.dim, 0);
  seed.u_start = bundle.initial_state;
  seed.coeffs.assign(2, Vec(p.dim, 0.0));
  const ResidualFn fn = [&](const Vec& x) {
    StepSolution s = seed;
    for (int j = 0; j < 2; ++j)
      s.coeffs[j] = Vec(x.begin() + static_cast<size_t>(j) * p.dim,
                        x.begin() + static_cast<size_t>(j + 1) * p.dim);
    return step_residual(p, s, 0.0, seed.tau, quad);
  };
  Vec x(2 * p.dim, 0.01);
  const Vec f0 = fn(x);

  Mat js, jp;
  const auto t0 = std::chrono::steady_clock::now();
  fd_jacobian_serial(fn, x, f0, 1e-7, js);
  const auto t1 = std::chrono::steady_clock::now();
  fd_jacobian_parallel(fn, x, f0, 1e-7, jp);
  const auto t2 = std::chrono::steady_clock::now();

  double max_diff = 0.0;
  for (size_t i = 0; i < js.data.size(); ++i)
    max_diff = std::max(max_diff, std::abs(js.data[i] - jp.data[i]));
  const double ts = seconds(t0, t1), tp = seconds(t1, t2);
  std::printf("fd_jacobian  %4d cols   serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   max|diff| %g\n",
              js.cols, ts * 1e3, tp * 1e3, ts / tp, max_diff);
}

void bench_audit() {
  const auto bundle = problems::nonlinear_pendulum(0.0, 1.0);
  NewtonConfig nc;
  const Trajectory traj = integrate(bundle.problem, TimeGrid::uniform(0.0, 200.0, 40000),
                                    bundle.initial_state, 1, gauss_legendre(3), nc);
  const QuadratureRule audit_quad = gauss_legendre(8);

  const auto t0 = std::chrono::steady_clock::now();
  const auto serial = audit::energy_identity_residual(bundle.problem, traj, audit_quad, false);
  const auto t1 = std::chrono::steady_clock::now();
  const auto parallel = audit::energy_identity_residual(bundle.problem, traj, audit_quad, true);
  const auto t2 = std::chrono::steady_clock::now();

  double max_diff = 0.0;
  for (size_t i = 0; i < serial.records.size(); ++i)
    max_diff = std::max(max_diff, std::abs(serial.records[i].identity_residual -
                                           parallel.records[i].identity_residual));
  const double ts = seconds(t0, t1), tp = seconds(t1, t2);
  std::printf("audit        %4zu steps  serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   max|diff| %g\n",
              traj.steps.size(), ts * 1e3, tp * 1e3, ts / tp, max_diff);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled; parallel kernels fall back to serial\n");
#endif
  bench_fd_jacobian();
  bench_audit();
  return 0;
}
