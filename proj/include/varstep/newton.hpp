// Damped Newton iteration on dense systems, with finite-difference or
// caller-supplied Jacobians. The finite-difference assembly is the hot loop
// of implicit stepping; it exists in a serial and an OpenMP flavor so the
// two can be checked against each other and benchmarked.
#pragma once

#include <functional>

#include "varstep/linalg.hpp"

namespace varstep {

enum class JacobianMode {
  automatic,          // supplied blocks when available, otherwise finite differences
  finite_difference,  // always finite differences
  supplied,           // require a supplied Jacobian
};

struct NewtonConfig {
  double tolerance = 1e-12;     // on the residual sup-norm
  int max_iterations = 25;
  JacobianMode jacobian = JacobianMode::automatic;
  double fd_step = 1e-7;        // step is fd_step * (1 + |coefficient|)
  double damping = 1.0;         // fixed update factor in (0, 1]
  bool parallel_fd = true;      // OpenMP over Jacobian columns

  void validate() const;
};

enum class NewtonStatus { converged, max_iterations, singular_jacobian };

struct NewtonResult {
  Vec x;                    // best iterate
  int iterations = 0;
  double residual_norm = 0.0;
  NewtonStatus status = NewtonStatus::converged;

  bool ok() const { return status == NewtonStatus::converged; }
};

using ResidualFn = std::function<Vec(const Vec&)>;
using JacobianFn = std::function<Mat(const Vec&)>;

// Forward-difference Jacobian, column c perturbed by step*(1+|x_c|).
// The residual function must be safe to call concurrently.
void fd_jacobian_serial(const ResidualFn& fn, const Vec& x, const Vec& f0, double step, Mat& jac);
void fd_jacobian_parallel(const ResidualFn& fn, const Vec& x, const Vec& f0, double step, Mat& jac);

// Solves fn(x) = 0. Non-convergence and singular Jacobians are reported in
// the result, never thrown; the best iterate seen is returned either way.
NewtonResult newton_solve(const ResidualFn& fn, Vec guess, const NewtonConfig& cfg,
                          const JacobianFn& jacobian = nullptr);

}  // namespace varstep
