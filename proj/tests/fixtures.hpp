#pragma once

#include <cmath>
#include <random>

#include "dlv/params.hpp"

namespace fixtures {

// The two parameter sets used throughout: beta0 = 10 (no tau-periodic orbit)
// and beta0 = 20 (orbit exists).
inline dlv::ModelParams fig1() { return {0.5, 10.0, 0.5, 3.0, 0.7, 2.0}; }
inline dlv::ModelParams fig2() { return {0.5, 20.0, 0.5, 3.0, 0.7, 2.0}; }

// Periodicity index exactly 1: y* = (2 pi / tau)^2 / (delta gamma0) and
// beta0 = (mu0 + gamma0 y*) e^{mu0 tau}.
inline dlv::ModelParams index_one() {
  const double tau = 3.0, mu0 = 0.5, gamma0 = 0.5, delta = 2.0;
  const double w = 2.0 * 3.14159265358979323846 / tau;
  const double y_star = w * w / (delta * gamma0);
  return {mu0, (mu0 + gamma0 * y_star) * std::exp(mu0 * tau), gamma0, tau, 0.7, delta};
}

// Random parameters with R0 > 1.
inline dlv::ModelParams random_coexisting(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const double mu0 = 0.1 + u(rng);
    const double tau = 0.5 + 4.0 * u(rng);
    const double beta0 = mu0 * std::exp(mu0 * tau) * (1.05 + 10.0 * u(rng));
    dlv::ModelParams p(mu0, beta0, 0.1 + 2.0 * u(rng), tau, 0.05 + 0.9 * u(rng), 0.1 + 3.0 * u(rng));
    if (p.recruitment() > p.mu0()) return p;
  }
}

}  // namespace fixtures
