#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dlv/history.hpp"
#include "dlv/params.hpp"

namespace dlv {

struct TrajectoryNode {
  double t;
  double x;
  double y;
  double dx;
  double dy;
};

struct State {
  double x;
  double y;
};

/// Solution of the delayed system on [tau, t_end], one node per step of
/// width h = tau / steps_per_delay. Values between nodes come from cubic
/// Hermite interpolation on the stored derivatives.
class Trajectory {
 public:
  Trajectory(ModelParams params, std::size_t steps_per_delay, std::vector<TrajectoryNode> nodes);

  const ModelParams& params() const { return params_; }
  std::size_t steps_per_delay() const { return steps_per_delay_; }
  double step() const { return params_.tau() / static_cast<double>(steps_per_delay_); }
  double t0() const { return nodes_.front().t; }
  double t_end() const { return nodes_.back().t; }
  std::span<const TrajectoryNode> nodes() const { return nodes_; }

  /// Dense state at t in [t0, t_end]; exact at nodes. Throws std::out_of_range.
  State sample(double t) const;

 private:
  ModelParams params_;
  std::size_t steps_per_delay_;
  std::vector<TrajectoryNode> nodes_;
};

/// Method-of-steps RK4 integration of the delayed system from `history`.
///
/// Delayed reads at full steps land on stored nodes; half-step reads use
/// Hermite interpolation of the history (first delay interval) or of the
/// trajectory itself afterwards. States undershooting zero by at most 1e-10
/// are clamped; larger undershoot or non-finite values throw std::runtime_error.
Trajectory integrate(const ModelParams& params, const HistoryState& history, double t_end,
                     std::size_t steps_per_delay);

inline State sample_state(const Trajectory& traj, double t) { return traj.sample(t); }

/// Age density x0(a) sampled on a uniform grid over [0, a_max]. Values past
/// a_max are treated as zero and values in between by linear interpolation.
class AgeProfile {
 public:
  AgeProfile(double a_max, std::vector<double> samples);

  double a_max() const { return a_max_; }
  double spacing() const { return a_max_ / static_cast<double>(samples_.size() - 1); }
  std::span<const double> samples() const { return samples_; }

  double operator()(double a) const;
  /// Exact integral of the piecewise-linear interpolant over [lo, hi].
  double integral(double lo, double hi) const;

 private:
  double a_max_;
  std::vector<double> samples_;
};

struct Prelude {
  HistoryState history;         ///< phi on [0, tau] and y(tau)
  std::vector<double> juvenile; ///< psi on the same grid, diagnostic only
  std::vector<double> predator; ///< y on the same grid
};

/// Builds the DDE initial condition from PDE data (x0, y0) by solving the
/// non-autonomous system for (phi, psi, y) on [0, tau] with RK4 on
/// `intervals` steps. Requires a_max >= 2 tau.
Prelude prelude_from_pde(const ModelParams& params, const AgeProfile& x0, double y0,
                         std::size_t intervals);

}  // namespace dlv
