#include "varstep/problems.hpp"

#include <cmath>
#include <memory>
#include <set>
#include <stdexcept>

#include "varstep/audit.hpp"
#include "varstep/galerkin.hpp"

namespace varstep::problems {

namespace {

Mat skew_2x2() {
  Mat C(2, 2);
  C(0, 1) = 1.0;
  C(1, 0) = -1.0;
  return C;
}

EvolutionProblem phase_space_skeleton() {
  EvolutionProblem p;
  p.dim = 2;
  p.is_C_constant = true;
  p.is_C_skew = true;
  const Mat C = skew_2x2();
  p.structure_apply = [C](const Vec&, const Vec& v) { return matvec(C, v); };
  p.structure_matrix = [C](const Vec&) { return C; };
  return p;
}

double parse_real(const std::map<std::string, std::string>& params, const std::string& key,
                  double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  size_t pos = 0;
  const double v = std::stod(it->second, &pos);
  if (pos != it->second.size()) throw std::invalid_argument("parameter " + key + ": not a number");
  return v;
}

int parse_int(const std::map<std::string, std::string>& params, const std::string& key, int fallback) {
  const double v = parse_real(params, key, fallback);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) throw std::invalid_argument("parameter " + key + ": not an integer");
  return i;
}

void reject_unknown(const std::map<std::string, std::string>& params, std::set<std::string> known) {
  for (const auto& [key, value] : params) {
    (void)value;
    if (!known.count(key)) throw std::invalid_argument("unknown problem parameter: " + key);
  }
}

}  // namespace

ProblemBundle harmonic_oscillator(double p0, double q0) {
  ProblemBundle b;
  b.problem = phase_space_skeleton();
  b.problem.energy = [](const Vec& u) { return 0.5 * (u[0] * u[0] + u[1] * u[1]); };
  b.problem.energy_gradient = [](const Vec& u) { return u; };
  b.problem.energy_hessian = [](const Vec&) { return Mat::identity(2); };
  b.problem.energy_poly_degree = 2;
  b.initial_state = {p0, q0};
  b.solution = [p0, q0](double t) {
    return Vec{p0 * std::cos(t) + q0 * std::sin(t), q0 * std::cos(t) - p0 * std::sin(t)};
  };
  b.recommended_quadrature_order = [](int k) { return k + 1; };
  b.quadrature_note = "quadratic energy: balance integrand degree 2k+1 <= 2m-1 at m = k+1";
  b.description = "harmonic oscillator, skew structure, conserved quadratic energy";
  return b;
}

ProblemBundle nonlinear_pendulum(double p0, double q0) {
  ProblemBundle b;
  b.problem = phase_space_skeleton();
  b.problem.energy = [](const Vec& u) { return 0.5 * u[0] * u[0] + (1.0 - std::cos(u[1])); };
  b.problem.energy_gradient = [](const Vec& u) { return Vec{u[0], std::sin(u[1])}; };
  b.problem.energy_hessian = [](const Vec& u) {
    Mat h(2, 2);
    h(0, 0) = 1.0;
    h(1, 1) = std::cos(u[1]);
    return h;
  };
  b.initial_state = {p0, q0};
  b.recommended_quadrature_order = [](int k) { return k + 2; };
  b.quadrature_note = "non-polynomial energy: no finite exactness order, m = k+2 as overintegration baseline";
  b.description = "pendulum with trigonometric potential, skew structure";
  return b;
}

ProblemBundle quadratic_gradient_flow(const Mat& A, Vec u0) {
  if (A.rows != A.cols) throw std::invalid_argument("quadratic_gradient_flow: A must be square");
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j)
      if (std::abs(A(i, j) - A(j, i)) > 1e-12 * (1.0 + max_abs(A)))
        throw std::invalid_argument("quadratic_gradient_flow: A must be symmetric");
  if (static_cast<int>(u0.size()) != A.rows)
    throw std::invalid_argument("quadratic_gradient_flow: u0 dimension mismatch");
  const int n = A.rows;
  auto Ashared = std::make_shared<const Mat>(A);

  ProblemBundle b;
  b.problem.dim = n;
  b.problem.is_C_constant = true;
  b.problem.is_C_spd = true;
  b.problem.energy = [Ashared](const Vec& u) { return 0.5 * dot(u, matvec(*Ashared, u)); };
  b.problem.energy_gradient = [Ashared](const Vec& u) { return matvec(*Ashared, u); };
  b.problem.energy_hessian = [Ashared](const Vec&) { return *Ashared; };
  b.problem.structure_apply = [](const Vec&, const Vec& v) { return v; };
  b.problem.structure_matrix = [n](const Vec&) { return Mat::identity(n); };
  b.problem.energy_poly_degree = 2;
  b.initial_state = std::move(u0);
  Vec start = b.initial_state;
  b.solution = [Ashared, start](double t) {
    Mat At = *Ashared;
    for (double& v : At.data) v *= -t;
    return matvec(audit::matrix_exponential(At), start);
  };
  b.recommended_quadrature_order = [](int k) { return k + 1; };
  b.quadrature_note = "quadratic energy: balance integrand degree 2k+1 <= 2m-1 at m = k+1";
  b.description = "linear gradient flow with SPD stiffness, contracting to the origin";
  return b;
}

ProblemBundle double_well_gradient_flow(int n, uint64_t seed, double amplitude) {
  if (n < 1) throw std::invalid_argument("double_well_gradient_flow: n must be positive");
  ProblemBundle b;
  b.problem.dim = n;
  b.problem.is_C_constant = true;
  b.problem.is_C_spd = true;
  b.problem.energy = [](const Vec& u) {
    double h = 0.0;
    for (double v : u) {
      const double w = v * v - 1.0;
      h += 0.25 * w * w;
    }
    return h;
  };
  b.problem.energy_gradient = [](const Vec& u) {
    Vec g(u.size());
    for (size_t i = 0; i < u.size(); ++i) g[i] = u[i] * u[i] * u[i] - u[i];
    return g;
  };
  b.problem.energy_hessian = [n](const Vec& u) {
    Mat h(n, n);
    for (int i = 0; i < n; ++i) h(i, i) = 3.0 * u[i] * u[i] - 1.0;
    return h;
  };
  b.problem.structure_apply = [](const Vec&, const Vec& v) { return v; };
  b.problem.structure_matrix = [n](const Vec&) { return Mat::identity(n); };
  b.problem.energy_poly_degree = 4;
  Rng rng(seed);
  b.initial_state.resize(n);
  for (double& v : b.initial_state) v = rng.uniform(-amplitude, amplitude);
  b.recommended_quadrature_order = [](int k) { return 2 * k + 2; };
  b.quadrature_note = "quartic energy: balance integrand degree 4k+3 <= 2m-1 at m = 2k+2";
  b.description = "separable double-well gradient flow relaxing to +-1 states";
  return b;
}

ProblemBundle constrained_pendulum(double gravity, Vec p0, Vec q0) {
  if (p0.size() != 2 || q0.size() != 2)
    throw std::invalid_argument("constrained_pendulum: p0 and q0 must have length 2");
  const double g0 = 0.5 * (q0[0] * q0[0] + q0[1] * q0[1] - 1.0);
  const double hidden = q0[0] * p0[0] + q0[1] * p0[1];
  if (std::abs(g0) > 1e-12)
    throw std::invalid_argument("constrained_pendulum: initial position violates |q| = 1");
  if (std::abs(hidden) > 1e-12)
    throw std::invalid_argument("constrained_pendulum: initial velocity violates q . p = 0");

  ProblemBundle b;
  EvolutionProblem& p = b.problem;
  p.dim = 5;  // (p1, p2, q1, q2, lambda)
  p.is_C_constant = false;
  p.is_C_skew = false;
  p.algebraic_mask = {4};
  p.energy = [gravity](const Vec& u) {
    return 0.5 * (u[0] * u[0] + u[1] * u[1]) + gravity * u[3];
  };
  p.energy_gradient = [gravity](const Vec& u) { return Vec{u[0], u[1], 0.0, gravity, 0.0}; };
  p.energy_hessian = [](const Vec&) {
    Mat h(5, 5);
    h(0, 0) = 1.0;
    h(1, 1) = 1.0;
    return h;
  };
  p.energy_poly_degree = 2;
  p.structure_apply = [](const Vec& u, const Vec& v) {
    // rows: (dq/dt, -dp/dt, g_q(q) dq/dt)
    return Vec{v[2], v[3], -v[0], -v[1], u[2] * v[2] + u[3] * v[3]};
  };
  p.structure_matrix = [](const Vec& u) {
    Mat C(5, 5);
    C(0, 2) = 1.0;
    C(1, 3) = 1.0;
    C(2, 0) = -1.0;
    C(3, 1) = -1.0;
    C(4, 2) = u[2];
    C(4, 3) = u[3];
    return C;
  };
  p.structure_apply_jacobian = [](const Vec&, const Vec& v) {
    Mat J(5, 5);
    J(4, 2) = v[2];
    J(4, 3) = v[3];
    return J;
  };
  p.source = [](double, const Vec& u) {
    // constraint force -g_q(q)^T lambda in the momentum rows
    return Vec{0.0, 0.0, -u[2] * u[4], -u[3] * u[4], 0.0};
  };
  p.source_jacobian = [](double, const Vec& u) {
    Mat J(5, 5);
    J(2, 2) = -u[4];
    J(2, 4) = -u[2];
    J(3, 3) = -u[4];
    J(3, 4) = -u[3];
    return J;
  };
  p.constraint = [](const Vec& u) { return Vec{0.5 * (u[2] * u[2] + u[3] * u[3] - 1.0)}; };
  p.constraint_jacobian = [](const Vec& u) {
    Mat J(1, 5);
    J(0, 2) = u[2];
    J(0, 3) = u[3];
    return J;
  };
  b.constraint = p.constraint;

  b.initial_state = {p0[0], p0[1], q0[0], q0[1], 0.0};
  b.recommended_quadrature_order = [](int k) { return k + 2; };
  b.quadrature_note = "quadratic energy and constraint: m = k+2 overintegrates every coupling block";
  b.description = "planar pendulum on the unit circle with an algebraic multiplier";
  return b;
}

ProblemBundle cahn_hilliard_1d(int n_cells, double gamma, double L, double mean, uint64_t seed,
                               double amplitude) {
  if (n_cells < 3) throw std::invalid_argument("cahn_hilliard_1d: need at least 3 cells");
  if (!(gamma > 0.0) || !(L > 0.0))
    throw std::invalid_argument("cahn_hilliard_1d: gamma and L must be positive");
  const int n = n_cells;
  const double h = L / n;

  // Neumann stiffness of the gamma-weighted Dirichlet energy.
  Mat K(n, n);
  for (int e = 0; e + 1 < n; ++e) {
    const double w = gamma / h;
    K(e, e) += w;
    K(e + 1, e + 1) += w;
    K(e, e + 1) -= w;
    K(e + 1, e) -= w;
  }

  // Zero-mean orthonormal basis from difference vectors.
  std::vector<Vec> span;
  for (int i = 0; i + 1 < n; ++i) {
    Vec v(n, 0.0);
    v[i] = 1.0;
    v[i + 1] = -1.0;
    span.push_back(std::move(v));
  }
  auto V = std::make_shared<const galerkin::Basis>(galerkin::orthonormalize(span));

  // Rank-one shift makes K invertible; on zero-mean data the solution of the
  // shifted system is the zero-mean pseudo-inverse solve.
  Mat Kshift = K;
  const double beta = gamma / h;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Kshift(i, j) += beta / n;
  auto chol = std::make_shared<const CholFactors>(cholesky_factor(Kshift));
  auto Kshared = std::make_shared<const Mat>(K);

  const auto solve_zero_mean = [chol, n](Vec b) {
    double s = 0.0;
    for (double v : b) s += v;
    const double shift = s / n;
    for (double& v : b) v -= shift;  // clean round-off; inputs are zero-mean
    Vec z = cholesky_solve(*chol, std::move(b));
    s = 0.0;
    for (double v : z) s += v;
    const double zshift = s / n;
    for (double& v : z) v -= zshift;
    return z;
  };

  // Reduced structure operator V^T K^+ V, assembled once for exact Jacobians.
  auto Cr = std::make_shared<Mat>(n - 1, n - 1);
  for (int j = 0; j < n - 1; ++j) {
    Vec col(n);
    for (int i = 0; i < n; ++i) col[i] = V->V(i, j);
    const Vec z = solve_zero_mean(std::move(col));
    const Vec out = galerkin::project(*V, z);
    for (int i = 0; i < n - 1; ++i) (*Cr)(i, j) = out[i];
  }
  // Symmetrize the assembled operator; round-off is the only asymmetry.
  for (int i = 0; i < n - 1; ++i)
    for (int j = i + 1; j < n - 1; ++j) {
      const double v = 0.5 * ((*Cr)(i, j) + (*Cr)(j, i));
      (*Cr)(i, j) = v;
      (*Cr)(j, i) = v;
    }
  auto CrConst = std::shared_ptr<const Mat>(Cr);

  const auto reconstruct = [V, mean](const Vec& y) {
    Vec u = galerkin::lift(*V, y);
    for (double& v : u) v += mean;
    return u;
  };
  const auto psi = [](double s) {
    const double w = s * s - 1.0;
    return 0.25 * w * w;
  };
  const auto full_energy = [Kshared, psi, h, n](const Vec& u) {
    double e = 0.5 * dot(u, matvec(*Kshared, u));
    for (int i = 0; i < n; ++i) e += psi(u[i]) * h;
    return e;
  };
  const auto full_gradient = [Kshared, h, n](const Vec& u) {
    Vec g = matvec(*Kshared, u);
    for (int i = 0; i < n; ++i) g[i] += h * (u[i] * u[i] * u[i] - u[i]);
    return g;
  };

  ProblemBundle b;
  b.problem.dim = n - 1;
  b.problem.is_C_constant = true;
  b.problem.is_C_spd = true;
  b.problem.energy_poly_degree = 4;
  b.problem.energy = [reconstruct, full_energy](const Vec& y) { return full_energy(reconstruct(y)); };
  b.problem.energy_gradient = [V, reconstruct, full_gradient](const Vec& y) {
    return galerkin::project(*V, full_gradient(reconstruct(y)));
  };
  b.problem.energy_hessian = [V, Kshared, reconstruct, h, n](const Vec& y) {
    const Vec u = reconstruct(y);
    Mat H = *Kshared;
    for (int i = 0; i < n; ++i) H(i, i) += h * (3.0 * u[i] * u[i] - 1.0);
    const Mat HV = matmul(H, V->V);
    return matmul(transposed(V->V), HV);
  };
  b.problem.structure_apply = [V, solve_zero_mean](const Vec&, const Vec& w) {
    return galerkin::project(*V, solve_zero_mean(galerkin::lift(*V, w)));
  };
  b.problem.structure_matrix = [CrConst](const Vec&) { return *CrConst; };

  // Seeded random low-frequency profile in the natural Neumann cosine modes.
  // Keeping the start smooth means the transient is carried by resolved
  // modes; the one-step map damps stiff components only weakly (A-stable,
  // not L-stable), so nodal white noise would take forever to clear.
  Rng rng(seed);
  Vec u0(n, 0.0);
  const double pi = 3.14159265358979323846;
  for (int mode = 1; mode <= 6; ++mode) {
    const double coef = amplitude * rng.gaussian() / mode;
    for (int i = 0; i < n; ++i) u0[i] += coef * std::cos(mode * pi * (i + 0.5) / n);
  }
  b.initial_state = galerkin::project(*V, u0);
  b.reconstruct = reconstruct;
  b.recommended_quadrature_order = [](int k) { return 2 * k + 2; };
  b.quadrature_note = "quartic potential: balance integrand degree 4k+3 <= 2m-1 at m = 2k+2";
  b.description = "one-dimensional phase separation on the zero-mean subspace";
  return b;
}

ProblemBundle magnetoquasistatics_1d(int n, double sigma, double nu0, double nu2,
                                     std::function<Vec(double)> current_source, double a0_amplitude) {
  if (n < 1) throw std::invalid_argument("magnetoquasistatics_1d: n must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("magnetoquasistatics_1d: conductivity must be positive");
  if (nu0 <= 0.0 || nu2 < 0.0)
    throw std::invalid_argument("magnetoquasistatics_1d: need nu0 > 0 and nu2 >= 0");
  const double h = 1.0 / (n + 1);

  // Edge field b_e = (a_{e+1} - a_e)/h with clamped boundary values.
  const auto edge_field = [n, h](const Vec& a, int e) {
    const double left = (e == 0) ? 0.0 : a[e - 1];
    const double right = (e == n) ? 0.0 : a[e];
    return (right - left) / h;
  };
  const auto hprime = [nu0, nu2](double bv) { return (nu0 + nu2 * bv * bv) * bv; };

  ProblemBundle b;
  b.problem.dim = n;
  b.problem.is_C_constant = true;
  b.problem.is_C_spd = true;
  b.problem.energy_poly_degree = (nu2 > 0.0) ? 4 : 2;
  b.problem.energy = [n, h, nu0, nu2, edge_field](const Vec& a) {
    double e = 0.0;
    for (int ed = 0; ed <= n; ++ed) {
      const double bv = edge_field(a, ed);
      e += (0.5 * nu0 * bv * bv + 0.25 * nu2 * bv * bv * bv * bv) * h;
    }
    return e;
  };
  b.problem.energy_gradient = [n, edge_field, hprime](const Vec& a) {
    Vec g(n);
    for (int i = 0; i < n; ++i) g[i] = hprime(edge_field(a, i)) - hprime(edge_field(a, i + 1));
    return g;
  };
  b.problem.energy_hessian = [n, h, nu0, nu2, edge_field](const Vec& a) {
    Mat H(n, n);
    const auto hsecond = [nu0, nu2](double bv) { return nu0 + 3.0 * nu2 * bv * bv; };
    for (int i = 0; i < n; ++i) {
      const double left = hsecond(edge_field(a, i));
      const double right = hsecond(edge_field(a, i + 1));
      H(i, i) = (left + right) / h;
      if (i > 0) H(i, i - 1) = -left / h;
      if (i + 1 < n) H(i, i + 1) = -right / h;
    }
    return H;
  };
  b.problem.structure_apply = [sigma, h](const Vec&, const Vec& v) {
    Vec out(v);
    for (double& c : out) c *= sigma * h;
    return out;
  };
  b.problem.structure_matrix = [n, sigma, h](const Vec&) {
    Mat C(n, n);
    for (int i = 0; i < n; ++i) C(i, i) = sigma * h;
    return C;
  };
  if (current_source) {
    auto j = std::make_shared<const std::function<Vec(double)>>(std::move(current_source));
    b.problem.source = [j, h, n](double t, const Vec&) {
      Vec f = (*j)(t);
      if (static_cast<int>(f.size()) != n)
        throw std::invalid_argument("magnetoquasistatics_1d: source has wrong dimension");
      for (double& v : f) v *= -h;
      return f;
    };
    b.problem.source_jacobian = [n](double, const Vec&) { return Mat(n, n); };
  }

  b.initial_state.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < n; ++i) b.initial_state[i] = a0_amplitude * std::sin(pi * (i + 1) * h);
  b.recommended_quadrature_order = (nu2 > 0.0)
                                       ? std::function<int(int)>([](int k) { return 2 * k + 2; })
                                       : std::function<int(int)>([](int k) { return k + 1; });
  b.quadrature_note = (nu2 > 0.0)
                          ? "quartic energy density: balance integrand degree 4k+3 <= 2m-1 at m = 2k+2"
                          : "quadratic energy density: balance integrand degree 2k+1 <= 2m-1 at m = k+1";
  b.description = "one-dimensional eddy-current diffusion with nonlinear reluctivity";
  return b;
}

ProblemBundle skew_quadratic_system(int n, uint64_t seed) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("skew_quadratic_system: dimension must be even and >= 2");
  Rng rng(seed);
  Mat G(n, n);
  for (double& v : G.data) v = rng.gaussian();
  Mat A = matmul(transposed(G), G);
  for (size_t e = 0; e < A.data.size(); ++e) A.data[e] /= 2.0 * n;
  for (int i = 0; i < n; ++i) A(i, i) += 1.0;

  // Rotation blocks plus a mild seeded skew perturbation keep the operator
  // well away from singular and the dynamics gentle.
  Mat S(n, n);
  for (int i = 0; i < n; i += 2) {
    S(i, i + 1) = 1.0;
    S(i + 1, i) = -1.0;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.1 * rng.gaussian();
      S(i, j) += v;
      S(j, i) -= v;
    }
  {
    const LuFactors f = lu_factor(S);
    if (f.singular) throw std::runtime_error("skew_quadratic_system: seeded skew operator is singular");
  }
  auto Ashared = std::make_shared<const Mat>(std::move(A));
  auto Sshared = std::make_shared<const Mat>(std::move(S));

  ProblemBundle b;
  b.problem.dim = n;
  b.problem.is_C_constant = true;
  b.problem.is_C_skew = true;
  b.problem.energy_poly_degree = 2;
  b.problem.energy = [Ashared](const Vec& u) { return 0.5 * dot(u, matvec(*Ashared, u)); };
  b.problem.energy_gradient = [Ashared](const Vec& u) { return matvec(*Ashared, u); };
  b.problem.energy_hessian = [Ashared](const Vec&) { return *Ashared; };
  b.problem.structure_apply = [Sshared](const Vec&, const Vec& v) { return matvec(*Sshared, v); };
  b.problem.structure_matrix = [Sshared](const Vec&) { return *Sshared; };

  b.initial_state.resize(n);
  for (double& v : b.initial_state) v = rng.gaussian();

  auto lu = std::make_shared<const LuFactors>(lu_factor(*Sshared));
  Vec u0 = b.initial_state;
  b.solution = [Ashared, lu, u0, n](double t) {
    // du/dt = -C^{-1} A u
    Mat B(n, n);
    for (int j = 0; j < n; ++j) {
      Vec col(n);
      for (int i = 0; i < n; ++i) col[i] = (*Ashared)(i, j);
      const Vec s = lu_solve(*lu, std::move(col));
      for (int i = 0; i < n; ++i) B(i, j) = -t * s[i];
    }
    return matvec(audit::matrix_exponential(B), u0);
  };
  b.recommended_quadrature_order = [](int k) { return k + 1; };
  b.quadrature_note = "quadratic energy: balance integrand degree 2k+1 <= 2m-1 at m = k+1";
  b.description = "dense constant-skew system with conserved quadratic energy";
  return b;
}

ProblemBundle make_problem(const std::string& name, const std::map<std::string, std::string>& params,
                           uint64_t seed) {
  if (name == "harmonic_oscillator") {
    reject_unknown(params, {"p0", "q0"});
    return harmonic_oscillator(parse_real(params, "p0", 0.0), parse_real(params, "q0", 1.0));
  }
  if (name == "nonlinear_pendulum") {
    reject_unknown(params, {"p0", "q0"});
    return nonlinear_pendulum(parse_real(params, "p0", 0.0), parse_real(params, "q0", 1.0));
  }
  if (name == "quadratic_gradient_flow") {
    reject_unknown(params, {"n"});
    const int n = parse_int(params, "n", 4);
    if (n < 1) throw std::invalid_argument("quadratic_gradient_flow: n must be positive");
    Rng rng(seed);
    Mat G(n, n);
    for (double& v : G.data) v = rng.gaussian();
    Mat A = matmul(transposed(G), G);
    for (size_t e = 0; e < A.data.size(); ++e) A.data[e] /= n;
    for (int i = 0; i < n; ++i) A(i, i) += 0.5;
    Vec u0(n);
    for (double& v : u0) v = rng.gaussian();
    return quadratic_gradient_flow(A, std::move(u0));
  }
  if (name == "double_well") {
    reject_unknown(params, {"n", "amplitude"});
    return double_well_gradient_flow(parse_int(params, "n", 16), seed,
                                     parse_real(params, "amplitude", 0.5));
  }
  if (name == "constrained_pendulum") {
    reject_unknown(params, {"gravity", "p0_1", "p0_2", "q0_1", "q0_2"});
    Vec p0 = {parse_real(params, "p0_1", 0.5), parse_real(params, "p0_2", 0.0)};
    Vec q0 = {parse_real(params, "q0_1", 0.0), parse_real(params, "q0_2", -1.0)};
    return constrained_pendulum(parse_real(params, "gravity", 1.0), std::move(p0), std::move(q0));
  }
  if (name == "cahn_hilliard") {
    reject_unknown(params, {"n", "gamma", "L", "mean", "amplitude"});
    return cahn_hilliard_1d(parse_int(params, "n", 64), parse_real(params, "gamma", 0.01),
                            parse_real(params, "L", 1.0), parse_real(params, "mean", 0.0), seed,
                            parse_real(params, "amplitude", 0.05));
  }
  if (name == "magnetoquasistatics") {
    reject_unknown(params, {"n", "sigma", "nu0", "nu2", "source_amplitude", "source_frequency",
                            "a0_amplitude"});
    const int n = parse_int(params, "n", 32);
    const double amp = parse_real(params, "source_amplitude", 1.0);
    const double freq = parse_real(params, "source_frequency", 1.0);
    std::function<Vec(double)> source;
    if (amp != 0.0) {
      const double h = 1.0 / (n + 1);
      source = [n, h, amp, freq](double t) {
        Vec j(n);
        const double pi = 3.14159265358979323846;
        const double envelope = amp * std::sin(2.0 * pi * freq * t);
        for (int i = 0; i < n; ++i) {
          const double x = (i + 1) * h;
          const double d = (x - 0.5) / 0.1;
          j[i] = envelope * std::exp(-0.5 * d * d);
        }
        return j;
      };
    }
    return magnetoquasistatics_1d(n, parse_real(params, "sigma", 1.0), parse_real(params, "nu0", 1.0),
                                  parse_real(params, "nu2", 0.0), std::move(source),
                                  parse_real(params, "a0_amplitude", 1.0));
  }
  if (name == "skew_quadratic") {
    reject_unknown(params, {"n"});
    return skew_quadratic_system(parse_int(params, "n", 10), seed);
  }
  std::string known;
  for (const std::string& p : problem_names()) known += (known.empty() ? "" : ", ") + p;
  throw std::invalid_argument("unknown problem '" + name + "' (known: " + known + ")");
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names = {
      "harmonic_oscillator", "nonlinear_pendulum", "quadratic_gradient_flow", "double_well",
      "constrained_pendulum", "cahn_hilliard",     "magnetoquasistatics",     "skew_quadratic"};
  return names;
}

}  // namespace varstep::problems
