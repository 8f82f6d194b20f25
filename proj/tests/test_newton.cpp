#include <doctest.h>

#include <cmath>

#include "varstep/newton.hpp"

using namespace varstep;

TEST_CASE("newton: linear map converges in one iteration") {
  const ResidualFn fn = [](const Vec& x) { return Vec{2.0 * x[0] - 4.0}; };
  const JacobianFn jac = [](const Vec&) {
    Mat j(1, 1);
    j(0, 0) = 2.0;
    return j;
  };
  NewtonConfig cfg;
  const NewtonResult r = newton_solve(fn, {0.0}, cfg, jac);
  REQUIRE(r.ok());
  CHECK(r.iterations == 1);
  CHECK(r.x[0] == doctest::Approx(2.0).epsilon(1e-12));
  // finite differences pay one cleanup step for the cancellation in the slope
  const NewtonResult rfd = newton_solve(fn, {0.0}, cfg);
  REQUIRE(rfd.ok());
  CHECK(rfd.iterations <= 2);
  CHECK(rfd.x[0] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("newton: sqrt(2) within six iterations") {
  const ResidualFn fn = [](const Vec& x) { return Vec{x[0] * x[0] - 2.0}; };
  NewtonConfig cfg;
  const NewtonResult r = newton_solve(fn, {1.0}, cfg);
  REQUIRE(r.ok());
  CHECK(r.iterations <= 6);
  CHECK(r.residual_norm <= 1e-12);
  CHECK(r.x[0] == doctest::Approx(1.4142135623730951).epsilon(1e-11));
}

TEST_CASE("newton: x^2+1 has no real root") {
  const ResidualFn fn = [](const Vec& x) { return Vec{x[0] * x[0] + 1.0}; };
  NewtonConfig cfg;
  const NewtonResult r = newton_solve(fn, {1.0}, cfg);
  CHECK_FALSE(r.ok());
  CHECK(r.status == NewtonStatus::max_iterations);
  CHECK(r.residual_norm >= 1.0);  // best possible value of x^2+1
}

TEST_CASE("newton: singular jacobian reported") {
  const ResidualFn fn = [](const Vec& x) { return Vec{x[0] + x[1] - 1.0, 2.0 * x[0] + 2.0 * x[1] - 7.0}; };
  NewtonConfig cfg;
  const NewtonResult r = newton_solve(fn, {0.0, 0.0}, cfg);
  CHECK(r.status == NewtonStatus::singular_jacobian);
}

TEST_CASE("newton: supplied jacobian and damping") {
  const ResidualFn fn = [](const Vec& x) { return Vec{std::exp(x[0]) - 2.0}; };
  const JacobianFn jac = [](const Vec& x) {
    Mat j(1, 1);
    j(0, 0) = std::exp(x[0]);
    return j;
  };
  NewtonConfig cfg;
  cfg.jacobian = JacobianMode::supplied;
  const NewtonResult r = newton_solve(fn, {0.0}, cfg, jac);
  REQUIRE(r.ok());
  CHECK(r.x[0] == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  NewtonConfig damped = cfg;
  damped.jacobian = JacobianMode::automatic;
  damped.damping = 0.5;
  damped.max_iterations = 200;
  const NewtonResult rd = newton_solve(fn, {0.0}, damped);
  REQUIRE(rd.ok());
  CHECK(rd.x[0] == doctest::Approx(std::log(2.0)).epsilon(1e-10));

  CHECK_THROWS_AS(newton_solve(fn, {0.0}, cfg, nullptr), std::invalid_argument);
}

TEST_CASE("newton: config validation") {
  NewtonConfig cfg;
  cfg.tolerance = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = NewtonConfig{};
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = NewtonConfig{};
  cfg.damping = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
