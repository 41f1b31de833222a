#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dlv/history.hpp"
#include "dlv/params.hpp"

namespace dlv {

/// Rates of the classical system x' = a x - b x y, y' = c x y - d y.
struct PlanarParams {
  double a;
  double b;
  double c;
  double d;

  /// Validates positivity; throws std::invalid_argument.
  static PlanarParams make(double a, double b, double c, double d);

  /// The planar system a tau-periodic solution of the delayed model must
  /// satisfy: a = beta0 e^{-mu0 tau} - mu0, b = gamma0, c = alpha gamma0,
  /// d = delta. Requires R0 > 1.
  static PlanarParams from_model(const ModelParams& p);

  double x_star() const { return d / c; }
  double y_star() const { return a / b; }
  /// Small-amplitude period 2 pi / sqrt(a d).
  double linear_period() const;
};

/// Conserved quantity d g(c x / d) + a g(b y / a).
double energy(const PlanarParams& pp, double x, double y);

struct PeriodMeasurement {
  double period;
  double max_energy_drift;  ///< max |E(t) - E(0)| / E(0) over the measured revolution
  std::size_t steps;
};

/// Period of the closed orbit at the given energy level, measured by RK4 from
/// the section point (x0, a/b), x0 > d/c, to the first return to that section.
PeriodMeasurement measure_period(const PlanarParams& pp, double energy_level);

inline double period(const PlanarParams& pp, double energy_level) {
  return measure_period(pp, energy_level).period;
}

/// The unique tau-periodic solution (p, q) of the delayed system, sampled at
/// `samples + 1` uniform times over [tau, 2 tau], phase-normalised so that
/// p(tau) = X* and q(tau) < y*.
struct PeriodicOrbit {
  double t0;       ///< tau
  double period;   ///< tau
  double energy;         ///< Lyapunov functional of the orbit window (constant along it)
  double planar_energy;  ///< level of the conserved planar quantity on the orbit
  double closure_residual;
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> dp;
  std::vector<double> dq;

  double spacing() const { return period / static_cast<double>(p.size() - 1); }

  /// (p, q) at any t >= tau, extended periodically.
  std::pair<double, double> at(double t) const;

  /// The orbit as a history: phi(s) = p(s + tau), y_tau = q(tau).
  HistoryState as_history() const;
};

/// Nothing when the periodicity index is <= 1; otherwise solves
/// T(E) = tau and samples the orbit. Throws std::runtime_error if the energy
/// bracket cannot be found below 1e6.
std::optional<PeriodicOrbit> find_periodic_orbit(const ModelParams& params, std::size_t samples);

}  // namespace dlv
