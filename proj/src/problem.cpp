#include "varstep/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace varstep {

std::vector<char> EvolutionProblem::algebraic_lookup() const {
  std::vector<char> mask(dim, 0);
  for (int i : algebraic_mask) {
    if (i < 0 || i >= dim) throw std::invalid_argument("algebraic_mask: index out of range");
    mask[i] = 1;
  }
  return mask;
}

Vec residual(const EvolutionProblem& p, double t, const Vec& u, const Vec& udot) {
  if (static_cast<int>(u.size()) != p.dim || static_cast<int>(udot.size()) != p.dim)
    throw std::invalid_argument("residual: state dimension mismatch");
  Vec r = p.structure_apply(u, udot);
  if (static_cast<int>(r.size()) != p.dim)
    throw std::invalid_argument("residual: structure_apply returned wrong dimension");
  const Vec g = p.energy_gradient(u);
  for (int i = 0; i < p.dim; ++i) r[i] += g[i];
  if (p.has_source()) {
    const Vec f = p.source(t, u);
    for (int i = 0; i < p.dim; ++i) r[i] -= f[i];
  }
  return r;
}

double energy_rate(const EvolutionProblem& p, double t, const Vec& u, const Vec& udot) {
  if (static_cast<int>(u.size()) != p.dim || static_cast<int>(udot.size()) != p.dim)
    throw std::invalid_argument("energy_rate: state dimension mismatch");
  double rate = -dot(p.structure_apply(u, udot), udot);
  if (p.has_source()) rate += dot(p.source(t, u), udot);
  return rate;
}

double check_gradient_consistency(const EvolutionProblem& p, const Vec& u, double h) {
  if (h <= 0.0) throw std::invalid_argument("check_gradient_consistency: h must be positive");
  const Vec g = p.energy_gradient(u);
  Vec probe = u;
  double worst = 0.0;
  for (int i = 0; i < p.dim; ++i) {
    const double ui = u[i];
    probe[i] = ui + h;
    const double hp = p.energy(probe);
    probe[i] = ui - h;
    const double hm = p.energy(probe);
    probe[i] = ui;
    const double fd = (hp - hm) / (2.0 * h);
    const double err = std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i]));
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace varstep
