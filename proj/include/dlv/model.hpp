#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "dlv/history.hpp"
#include "dlv/params.hpp"

namespace dlv {

struct Thresholds {
  double r0;       ///< basic reproduction number beta0 e^{-mu0 tau} / mu0
  double r_minus;  ///< reproduction before the predation age; always 0 here
  double a1;       ///< youngest age exposed to predation; equals tau
};

Thresholds thresholds(const ModelParams& p);

enum class EquilibriumKind { extinction, coexistence };

struct Equilibrium {
  EquilibriumKind kind;
  double x;  ///< adult prey density
  double y;  ///< predator density
};

/// E0 always; the coexistence point only when R0 > 1 (strict).
std::vector<Equilibrium> equilibria(const ModelParams& p);

/// The coexistence point, or nothing when R0 <= 1.
std::optional<Equilibrium> coexistence(const ModelParams& p);

/// Same as coexistence() but throws std::domain_error when R0 <= 1.
Equilibrium require_coexistence(const ModelParams& p);

struct Rates {
  double dx;
  double dy;
};

/// Right-hand side of the delayed system given X(t - tau), X(t) and y(t).
inline Rates vector_field(const ModelParams& p, double x_delayed, double x_now, double y_now) {
  const double predation = p.gamma0() * x_now * y_now;
  return {p.recruitment() * x_delayed - p.mu0() * x_now - predation,
          p.alpha() * predation - p.delta() * y_now};
}

/// tau * sqrt(delta y* gamma0) / (2 pi). A tau-periodic orbit exists iff it
/// exceeds 1; purely imaginary characteristic roots exist iff it is an integer.
double periodicity_index(const ModelParams& p);

enum class PartitionLabel {
  S3,                  ///< y_tau > 0 and phi > 0 everywhere
  S2_only,             ///< y_tau > 0, positive prey mass, phi vanishes somewhere
  S1_only,             ///< y_tau = 0 and phi > 0 everywhere
  boundary_S2_cap_S0,  ///< y_tau = 0, positive prey mass, phi vanishes somewhere
  boundary_S0,         ///< no prey mass
};

std::string_view to_string(PartitionLabel label);

/// Places a history in the partition of the nonnegative cone. Positivity of
/// phi is decided on the sample grid; prey mass uses the trapezoid rule with a
/// threshold of 1e-14.
PartitionLabel classify(const HistoryState& history);

/// True for labels outside S2, i.e. histories that can never reach E*.
bool is_boundary(PartitionLabel label);

}  // namespace dlv
