#pragma once

#include <cstddef>
#include <vector>

#include "dlv/dde.hpp"
#include "dlv/history.hpp"
#include "dlv/params.hpp"

namespace dlv {

/// x - ln x - 1 on (0, inf). Nonnegative, zero only at x = 1. Throws
/// std::domain_error for x < 1e-300 (including x <= 0).
double g(double x);

struct LyapunovValue {
  double v1;     ///< alpha X* g(X(t) / X*)
  double v2;     ///< y* g(y(t) / y*)
  double v3;     ///< alpha beta0 e^{-mu0 tau} X* times the window integral of g(X / X*)
  double total;
};

/// Volterra-type functional of a history window. V3 uses the composite
/// trapezoid rule on the history grid with the h^2/12 endpoint slope
/// correction. Requires R0 > 1, phi > 0 on the grid and y_tau > 0.
LyapunovValue evaluate(const ModelParams& params, const HistoryState& window);

/// Functional of the trajectory window ending at node `k`, which must satisfy
/// k >= steps_per_delay so the window lies inside the trajectory.
LyapunovValue evaluate_at_node(const ModelParams& params, const Trajectory& traj, std::size_t k);

struct EnergySample {
  double t;
  double f;            ///< functional value F(t)
  double analytic_df;  ///< -alpha beta0 e^{-mu0 tau} X* g(X(t - tau) / X(t))
};

/// F(t) at every node from t = 2 tau on, with the sliding window
/// X(t + s - tau), s in [0, tau].
std::vector<EnergySample> energy_series(const ModelParams& params, const Trajectory& traj);

/// Same, starting at node `first` (>= steps_per_delay). Only nodes from
/// first - steps_per_delay on need positive prey.
std::vector<EnergySample> energy_series(const ModelParams& params, const Trajectory& traj,
                                        std::size_t first);

/// Largest gap between the seven-point centred difference of F and the
/// analytic derivative over interior nodes, divided by the largest analytic
/// magnitude. Stencils spanning t = 3 tau or 4 tau, where higher derivatives
/// of F jump, are left out. Returns the absolute gap when the analytic side
/// vanishes identically.
double derivative_check(const ModelParams& params, const Trajectory& traj);

/// Same as above on an already computed series with node spacing `h`.
double derivative_check(std::span<const EnergySample> series, double h, double tau);

}  // namespace dlv
