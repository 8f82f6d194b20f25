#include "varstep/galerkin.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "varstep/csv.hpp"

namespace varstep::galerkin {

Basis orthonormalize(const std::vector<Vec>& vectors) {
  if (vectors.empty()) throw std::invalid_argument("orthonormalize: no vectors given");
  const int n = static_cast<int>(vectors.front().size());
  const int r = static_cast<int>(vectors.size());
  for (const Vec& v : vectors)
    if (static_cast<int>(v.size()) != n) throw std::invalid_argument("orthonormalize: inconsistent lengths");
  if (r > n) throw std::invalid_argument("orthonormalize: more vectors than dimensions");

  std::vector<Vec> q(vectors);
  for (int j = 0; j < r; ++j) {
    const double original = norm2(vectors[j]);
    // Two Gram-Schmidt sweeps; the second pass cleans up cancellation.
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) {
        const double proj = dot(q[i], q[j]);
        add_scaled(q[j], -proj, q[i]);
      }
    }
    const double remaining = norm2(q[j]);
    if (!(remaining > 1e-10 * original) || original == 0.0)
      throw std::invalid_argument("orthonormalize: rank deficiency at column " + std::to_string(j));
    const double inv = 1.0 / remaining;
    for (double& v : q[j]) v *= inv;
  }

  Basis basis;
  basis.V = Mat(n, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < n; ++i) basis.V(i, j) = q[j][i];
  return basis;
}

Basis random_basis(int n, int r, uint64_t seed) {
  if (r < 1 || r > n) throw std::invalid_argument("random_basis: need 1 <= r <= n");
  Rng rng(seed);
  std::vector<Vec> cols(r, Vec(n));
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < n; ++i) cols[j][i] = rng.gaussian();
  return orthonormalize(cols);
}

Vec lift(const Basis& basis, const Vec& y) { return matvec(basis.V, y); }

Vec project(const Basis& basis, const Vec& u) { return matvec_transposed(basis.V, u); }

EvolutionProblem reduce(const EvolutionProblem& problem, const Basis& basis) {
  if (basis.n() != problem.dim) throw std::invalid_argument("reduce: basis shape does not match problem");
  auto full = std::make_shared<const EvolutionProblem>(problem);
  auto V = std::make_shared<const Mat>(basis.V);

  EvolutionProblem red;
  red.dim = basis.r();
  red.is_C_constant = problem.is_C_constant;
  red.is_C_skew = problem.is_C_skew;
  red.is_C_spd = problem.is_C_spd;
  red.energy_poly_degree = problem.energy_poly_degree;

  red.energy = [full, V](const Vec& y) { return full->energy(matvec(*V, y)); };
  red.energy_gradient = [full, V](const Vec& y) {
    return matvec_transposed(*V, full->energy_gradient(matvec(*V, y)));
  };
  red.structure_apply = [full, V](const Vec& y, const Vec& w) {
    return matvec_transposed(*V, full->structure_apply(matvec(*V, y), matvec(*V, w)));
  };
  if (problem.has_source()) {
    red.source = [full, V](double t, const Vec& y) {
      return matvec_transposed(*V, full->source(t, matvec(*V, y)));
    };
  }
  if (problem.structure_matrix) {
    red.structure_matrix = [full, V](const Vec& y) {
      const Mat CV = matmul(full->structure_matrix(matvec(*V, y)), *V);
      return matmul(transposed(*V), CV);
    };
  }
  if (problem.energy_hessian) {
    red.energy_hessian = [full, V](const Vec& y) {
      const Mat HV = matmul(full->energy_hessian(matvec(*V, y)), *V);
      return matmul(transposed(*V), HV);
    };
  }
  if (problem.structure_apply_jacobian) {
    red.structure_apply_jacobian = [full, V](const Vec& y, const Vec& w) {
      const Mat JV = matmul(full->structure_apply_jacobian(matvec(*V, y), matvec(*V, w)), *V);
      return matmul(transposed(*V), JV);
    };
  }
  if (problem.source_jacobian) {
    red.source_jacobian = [full, V](double t, const Vec& y) {
      const Mat JV = matmul(full->source_jacobian(t, matvec(*V, y)), *V);
      return matmul(transposed(*V), JV);
    };
  }
  return red;
}

OdeSystem reduce_nonstructured(const std::function<Mat(const Vec&)>& B,
                               const std::function<Vec(const Vec&)>& energy_gradient,
                               const std::function<Vec(const Vec&)>& source, const Basis& basis) {
  if (!B || !energy_gradient) throw std::invalid_argument("reduce_nonstructured: missing maps");
  auto V = std::make_shared<const Mat>(basis.V);
  OdeSystem sys;
  sys.dim = basis.r();
  sys.rhs = [B, energy_gradient, source, V](double, const Vec& y) {
    const Vec u = matvec(*V, y);
    Vec rhs = matvec(B(u), energy_gradient(u));
    if (source) {
      const Vec g = source(u);
      for (size_t i = 0; i < rhs.size(); ++i) rhs[i] += g[i];
    }
    return matvec_transposed(*V, rhs);
  };
  return sys;
}

Vec rk4_integrate(const OdeSystem& sys, Vec y0, double t0, double T, int steps) {
  if (steps < 1) throw std::invalid_argument("rk4_integrate: need at least one step");
  const double tau = (T - t0) / steps;
  Vec y = std::move(y0);
  for (int n = 0; n < steps; ++n) {
    const double t = t0 + n * tau;
    const Vec k1 = sys.rhs(t, y);
    Vec y2 = y;
    add_scaled(y2, 0.5 * tau, k1);
    const Vec k2 = sys.rhs(t + 0.5 * tau, y2);
    Vec y3 = y;
    add_scaled(y3, 0.5 * tau, k2);
    const Vec k3 = sys.rhs(t + 0.5 * tau, y3);
    Vec y4 = y;
    add_scaled(y4, tau, k3);
    const Vec k4 = sys.rhs(t + tau, y4);
    for (size_t i = 0; i < y.size(); ++i)
      y[i] += (tau / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return y;
}

CounterexampleInstance counterexample_search(uint64_t base_seed, int max_instances,
                                             double min_discrepancy) {
  for (int trial = 0; trial < max_instances; ++trial) {
    const uint64_t seed = base_seed + static_cast<uint64_t>(trial);
    Rng rng(seed);
    Mat G(2, 2);
    for (double& v : G.data) v = rng.gaussian();
    Mat M = matmul(transposed(G), G);
    M(0, 0) += 0.1;
    M(1, 1) += 0.1;
    Vec v = {rng.gaussian(), rng.gaussian()};
    const double len = norm2(v);
    if (len < 1e-8) continue;
    for (double& c : v) c /= len;

    const double vMv = M(0, 0) * v[0] * v[0] + (M(0, 1) + M(1, 0)) * v[0] * v[1] + M(1, 1) * v[1] * v[1];
    const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    // v^T M^{-1} v for the symmetric 2x2 inverse.
    const double vMinvv =
        (M(1, 1) * v[0] * v[0] - (M(0, 1) + M(1, 0)) * v[0] * v[1] + M(0, 0) * v[1] * v[1]) / det;

    const double rate_s = 1.0 / vMv;
    const double rate_ns = vMinvv;
    const double disc = std::abs(rate_ns - rate_s) / rate_s;
    if (disc >= min_discrepancy) {
      CounterexampleInstance inst;
      inst.seed = seed;
      inst.M = M;
      inst.basis.V = Mat(2, 1);
      inst.basis.V(0, 0) = v[0];
      inst.basis.V(1, 0) = v[1];
      inst.rate_structured = rate_s;
      inst.rate_nonstructured = rate_ns;
      inst.discrepancy = disc;
      return inst;
    }
  }
  throw std::runtime_error("counterexample_search: no qualifying instance found");
}

EvolutionProblem counterexample_problem(const CounterexampleInstance& instance) {
  const Mat M = instance.M;
  EvolutionProblem p;
  p.dim = 2;
  p.is_C_constant = true;
  p.is_C_spd = true;
  p.energy_poly_degree = 2;
  p.energy = [](const Vec& u) { return 0.5 * dot(u, u); };
  p.energy_gradient = [](const Vec& u) { return u; };
  p.energy_hessian = [](const Vec&) { return Mat::identity(2); };
  p.structure_apply = [M](const Vec&, const Vec& v) { return matvec(M, v); };
  p.structure_matrix = [M](const Vec&) { return M; };
  return p;
}

OdeSystem counterexample_nonstructured(const CounterexampleInstance& instance) {
  const Mat M = instance.M;
  const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
  Mat B(2, 2);
  B(0, 0) = -M(1, 1) / det;
  B(0, 1) = M(0, 1) / det;
  B(1, 0) = M(1, 0) / det;
  B(1, 1) = -M(0, 0) / det;
  return reduce_nonstructured([B](const Vec&) { return B; },
                              [](const Vec& u) { return u; }, nullptr, instance.basis);
}

void save_basis_csv(const Basis& basis, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_basis_csv: cannot open " + path);
  out << "n,r\n" << basis.n() << "," << basis.r() << "\n";
  for (int j = 0; j < basis.r(); ++j)
    for (int i = 0; i < basis.n(); ++i) out << io::format_number(basis.V(i, j)) << "\n";
}

Basis load_basis_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_basis_csv: cannot open " + path);
  std::string header;
  std::getline(in, header);
  if (header != "n,r") throw std::runtime_error("load_basis_csv: bad header in " + path);
  int n = 0, r = 0;
  char comma = 0;
  in >> n >> comma >> r;
  if (!in || comma != ',' || n < 1 || r < 1 || r > n)
    throw std::runtime_error("load_basis_csv: bad dimensions in " + path);
  Basis basis;
  basis.V = Mat(n, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < n; ++i) {
      double v = 0.0;
      in >> v;
      if (!in) throw std::runtime_error("load_basis_csv: truncated data in " + path);
      basis.V(i, j) = v;
    }
  return basis;
}

}  // namespace varstep::galerkin
