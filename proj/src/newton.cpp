#include "varstep/newton.hpp"

#include <cmath>
#include <stdexcept>

namespace varstep {

void NewtonConfig::validate() const {
  if (tolerance <= 0.0) throw std::invalid_argument("NewtonConfig: tolerance must be positive");
  if (max_iterations < 1) throw std::invalid_argument("NewtonConfig: max_iterations must be >= 1");
  if (damping <= 0.0 || damping > 1.0) throw std::invalid_argument("NewtonConfig: damping must be in (0, 1]");
  if (fd_step <= 0.0) throw std::invalid_argument("NewtonConfig: fd_step must be positive");
}

namespace {

inline void fd_column(const ResidualFn& fn, const Vec& x, const Vec& f0, double step, int c, Mat& jac) {
  Vec xp = x;
  const double h = step * (1.0 + std::abs(x[c]));
  xp[c] += h;
  const Vec fp = fn(xp);
  const double inv = 1.0 / h;
  for (int r = 0; r < jac.rows; ++r) jac(r, c) = (fp[r] - f0[r]) * inv;
}

}  // namespace

void fd_jacobian_serial(const ResidualFn& fn, const Vec& x, const Vec& f0, double step, Mat& jac) {
  const int n = static_cast<int>(x.size());
  jac = Mat(static_cast<int>(f0.size()), n);
  for (int c = 0; c < n; ++c) fd_column(fn, x, f0, step, c, jac);
}

void fd_jacobian_parallel(const ResidualFn& fn, const Vec& x, const Vec& f0, double step, Mat& jac) {
  const int n = static_cast<int>(x.size());
  jac = Mat(static_cast<int>(f0.size()), n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int c = 0; c < n; ++c) fd_column(fn, x, f0, step, c, jac);
}

NewtonResult newton_solve(const ResidualFn& fn, Vec guess, const NewtonConfig& cfg,
                          const JacobianFn& jacobian) {
  cfg.validate();
  if (cfg.jacobian == JacobianMode::supplied && !jacobian)
    throw std::invalid_argument("newton_solve: supplied Jacobian mode without a Jacobian");
  const bool use_supplied = jacobian && cfg.jacobian != JacobianMode::finite_difference;

  NewtonResult result;
  result.x = std::move(guess);
  Vec f = fn(result.x);
  result.residual_norm = norm_inf(f);
  double best_norm = result.residual_norm;
  Vec best_x = result.x;

  Mat jac;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    if (result.residual_norm <= cfg.tolerance) {
      result.x = std::move(best_x);
      result.residual_norm = best_norm;
      result.status = NewtonStatus::converged;
      return result;
    }
    if (use_supplied) {
      jac = jacobian(result.x);
    } else if (cfg.parallel_fd) {
      fd_jacobian_parallel(fn, result.x, f, cfg.fd_step, jac);
    } else {
      fd_jacobian_serial(fn, result.x, f, cfg.fd_step, jac);
    }
    const LuFactors lu = lu_factor(jac);
    if (lu.singular) {
      result.x = std::move(best_x);
      result.residual_norm = best_norm;
      result.status = NewtonStatus::singular_jacobian;
      return result;
    }
    Vec rhs = f;
    for (double& v : rhs) v = -v;
    const Vec dx = lu_solve(lu, std::move(rhs));
    add_scaled(result.x, cfg.damping, dx);
    f = fn(result.x);
    result.residual_norm = norm_inf(f);
    result.iterations = it + 1;
    if (!(result.residual_norm == result.residual_norm)) {  // NaN guard
      result.x = std::move(best_x);
      result.residual_norm = best_norm;
      result.status = NewtonStatus::max_iterations;
      return result;
    }
    if (result.residual_norm < best_norm) {
      best_norm = result.residual_norm;
      best_x = result.x;
    }
  }
  if (result.residual_norm <= cfg.tolerance) {
    result.status = NewtonStatus::converged;
    return result;
  }
  result.x = std::move(best_x);
  result.residual_norm = best_norm;
  result.status = NewtonStatus::max_iterations;
  return result;
}

}  // namespace varstep
