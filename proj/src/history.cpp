#include "dlv/history.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dlv/hermite.hpp"

namespace dlv {

namespace {

constexpr std::size_t kMinIntervals = 8;

std::vector<double> finite_difference_slopes(const std::vector<double>& v, double h) {
  const std::size_t n = v.size();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  return d;
}

}  // namespace

HistoryState::HistoryState(double tau, std::vector<double> values, std::vector<double> slopes,
                           double y_tau)
    : tau_(tau), values_(std::move(values)), slopes_(std::move(slopes)), y_tau_(y_tau) {
  if (!std::isfinite(tau) || !(tau > 0.0)) {
    throw std::invalid_argument("history: tau must be finite and > 0");
  }
  if (values_.size() < kMinIntervals + 1) {
    throw std::invalid_argument("history: need at least " + std::to_string(kMinIntervals + 1) +
                                " nodes, got " + std::to_string(values_.size()));
  }
  if (slopes_.size() != values_.size()) {
    throw std::invalid_argument("history: slope count does not match value count");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || !std::isfinite(slopes_[i])) {
      throw std::invalid_argument("history: non-finite sample at node " + std::to_string(i));
    }
    if (values_[i] < 0.0) {
      throw std::invalid_argument("history: negative sample at node " + std::to_string(i));
    }
  }
  if (!std::isfinite(y_tau_) || y_tau_ < 0.0) {
    throw std::invalid_argument("history: y_tau must be finite and >= 0");
  }
}

HistoryState HistoryState::from_samples(double tau, std::vector<double> values, double y_tau) {
  if (values.size() < kMinIntervals + 1) {
    throw std::invalid_argument("history: need at least " + std::to_string(kMinIntervals + 1) +
                                " nodes");
  }
  const double h = tau / static_cast<double>(values.size() - 1);
  auto slopes = finite_difference_slopes(values, h);
  return {tau, std::move(values), std::move(slopes), y_tau};
}

HistoryState HistoryState::from_function(double tau, std::size_t intervals,
                                         const std::function<double(double)>& f, double y_tau,
                                         const std::function<double(double)>& df) {
  std::vector<double> values(intervals + 1);
  const double h = tau / static_cast<double>(intervals);
  for (std::size_t i = 0; i <= intervals; ++i) values[i] = f(h * static_cast<double>(i));
  if (!df) return from_samples(tau, std::move(values), y_tau);
  std::vector<double> slopes(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) slopes[i] = df(h * static_cast<double>(i));
  return {tau, std::move(values), std::move(slopes), y_tau};
}

HistoryState HistoryState::constant(double tau, std::size_t intervals, double value,
                                    double y_tau) {
  return {tau, std::vector<double>(intervals + 1, value), std::vector<double>(intervals + 1, 0.0),
          y_tau};
}

std::size_t HistoryState::locate(double theta, double& s) const {
  const double slack = 1e-12 * tau_;
  if (!(theta >= -slack && theta <= tau_ + slack)) {
    throw std::out_of_range("history: theta " + std::to_string(theta) +
                            " outside [0, tau]");
  }
  const double h = spacing();
  const double pos = std::clamp(theta / h, 0.0, static_cast<double>(intervals()));
  auto i = static_cast<std::size_t>(pos);
  if (i >= intervals()) i = intervals() - 1;
  s = pos - static_cast<double>(i);
  return i;
}

double HistoryState::operator()(double theta) const {
  double s = 0.0;
  const std::size_t i = locate(theta, s);
  if (s == 0.0) return values_[i];
  if (s == 1.0) return values_[i + 1];
  return hermite(values_[i], slopes_[i], values_[i + 1], slopes_[i + 1], spacing(), s);
}

double HistoryState::slope(double theta) const {
  double s = 0.0;
  const std::size_t i = locate(theta, s);
  return hermite_slope(values_[i], slopes_[i], values_[i + 1], slopes_[i + 1], spacing(), s);
}

double HistoryState::integral() const {
  double sum = 0.5 * (values_.front() + values_.back());
  for (std::size_t i = 1; i + 1 < values_.size(); ++i) sum += values_[i];
  return sum * spacing();
}

}  // namespace dlv
