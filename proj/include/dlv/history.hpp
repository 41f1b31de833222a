#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dlv {

/// Initial condition of the delayed system: prey history phi on [0, tau]
/// sampled on a uniform grid, plus the predator density at t = tau.
///
/// Values between nodes come from cubic Hermite interpolation of the stored
/// (value, slope) pairs. The grid has at least 8 intervals and every sample is
/// nonnegative.
class HistoryState {
 public:
  HistoryState(double tau, std::vector<double> values, std::vector<double> slopes,
               double y_tau);

  /// Slopes estimated from the samples by second-order finite differences.
  static HistoryState from_samples(double tau, std::vector<double> values, double y_tau);

  /// Samples `f` (and `df` when given) on `intervals + 1` uniform nodes.
  static HistoryState from_function(double tau, std::size_t intervals,
                                    const std::function<double(double)>& f, double y_tau,
                                    const std::function<double(double)>& df = {});

  static HistoryState constant(double tau, std::size_t intervals, double value,
                               double y_tau);

  double tau() const { return tau_; }
  std::size_t intervals() const { return values_.size() - 1; }
  double spacing() const { return tau_ / static_cast<double>(intervals()); }
  std::span<const double> values() const { return values_; }
  std::span<const double> slopes() const { return slopes_; }
  double y_tau() const { return y_tau_; }

  /// phi(theta) for theta in [0, tau]; throws std::out_of_range outside.
  double operator()(double theta) const;
  double slope(double theta) const;

  /// Composite trapezoid integral of the samples over [0, tau].
  double integral() const;

 private:
  std::size_t locate(double theta, double& s) const;

  double tau_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  double y_tau_;
};

}  // namespace dlv
