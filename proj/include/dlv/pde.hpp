#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dlv/dde.hpp"
#include "dlv/history.hpp"
#include "dlv/params.hpp"

namespace dlv {

/// Uniform age grid with spacing da = tau / per_delay; the time step equals
/// da so characteristics run from node to node.
struct PdeGrid {
  std::size_t per_delay;  ///< nodes per delay; tau sits at index per_delay
  std::size_t nodes;      ///< grid covers [0, (nodes - 1) da]
  double da;

  double a_max() const { return da * static_cast<double>(nodes - 1); }

  /// Default truncation a_max = tau + 30 / (mu0 + gamma0 y*), rounded up to
  /// a grid multiple and never below 2 tau. With R0 <= 1 the predation term
  /// is dropped from the formula.
  static PdeGrid make(const ModelParams& p, std::size_t per_delay);
  static PdeGrid make(const ModelParams& p, std::size_t per_delay, double a_max);
};

struct PdeState {
  double t;
  std::vector<double> x;  ///< prey density at each grid age
  double y;               ///< predator density
};

/// One step of width da: exact decay along characteristics with the predator
/// frozen at a midpoint estimate, renewal from the transported profile, then
/// a Heun update of the predator.
PdeState step(const ModelParams& params, const PdeGrid& grid, const PdeState& state);

/// Integral of the density over [lo_index, hi_index] grid nodes: trapezoid
/// rule with Gregory end corrections (fourth order) from 6 intervals up.
double grid_integral(const PdeGrid& grid, std::span<const double> x, std::size_t lo,
                     std::size_t hi);

/// Adult prey X = int_tau^a_max x and juvenile prey Z = int_0^tau x.
double adult_mass(const PdeGrid& grid, const PdeState& s);
double juvenile_mass(const PdeGrid& grid, const PdeState& s);

PdeState initial_state(const PdeGrid& grid, const AgeProfile& x0, double y0);

/// Built-in "bump" profile: amplitude * sin^2(pi a / (2 tau)) on [0, 2 tau]
/// plus K e^{-m a}, with K chosen so that x0(0) = beta0 * adult mass. Initial
/// data violating the renewal condition put a jump on the characteristic
/// a = t that node-based age quadrature only resolves to O(da).
AgeProfile bump_profile(const ModelParams& params, const PdeGrid& grid, double amplitude);

struct PdeEquilibrium {
  std::vector<double> profile;
  double y2;
  double x2_at_zero;
};

/// Closed-form E2 profile on the grid: x2(0) = beta0 X*, decay at mu0 before
/// tau and at mu0 + gamma0 y* after. Throws std::domain_error when R0 <= 1.
PdeEquilibrium equilibrium_e2(const ModelParams& params, const PdeGrid& grid);

/// The E2 profile as continuous age density truncated at a_max.
double e2_density(const ModelParams& params, double a);

struct PdeSample {
  double t;
  double adult;     ///< X
  double juvenile;  ///< Z
  double y;
  double maturing;  ///< x(t, tau)
};

struct PdeRun {
  PdeState final;
  std::vector<PdeSample> series;  ///< one sample per step, starting at t = 0
};

/// Marches from `initial` to t_end. `observer`, when set, sees every state.
PdeRun simulate_pde(const ModelParams& params, const PdeGrid& grid, PdeState initial,
                    double t_end, const std::function<void(const PdeState&)>& observer = {});

/// DDE history X(theta) = int_tau^a_max x(theta, a) da on `intervals` + 1
/// nodes over [0, tau], with y(tau). Slopes come from the adult balance
/// X' = x(t, tau) - mu0 X - gamma0 y X.
HistoryState reduce_to_dde(const ModelParams& params, const PdeGrid& grid,
                           std::span<const PdeSample> series, std::size_t intervals);

}  // namespace dlv
