#include "dlv/dde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dlv/hermite.hpp"
#include "dlv/model.hpp"

namespace dlv {

namespace {

constexpr std::size_t kMinStepsPerDelay = 8;
constexpr double kUndershootTolerance = 1e-10;

double settle(double v, double t, const char* what) {
  if (!std::isfinite(v)) {
    throw std::runtime_error(std::string("integrate: non-finite ") + what + " at t = " +
                             std::to_string(t));
  }
  if (v < 0.0) {
    if (v < -kUndershootTolerance) {
      throw std::runtime_error(std::string("integrate: ") + what + " went negative (" +
                               std::to_string(v) + ") at t = " + std::to_string(t));
    }
    return 0.0;
  }
  return v;
}

}  // namespace

Trajectory::Trajectory(ModelParams params, std::size_t steps_per_delay,
                       std::vector<TrajectoryNode> nodes)
    : params_(params), steps_per_delay_(steps_per_delay), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw std::invalid_argument("trajectory: no nodes");
}

State Trajectory::sample(double t) const {
  const double h = step();
  const double slack = 1e-12 * std::max(1.0, std::abs(t_end()));
  if (!(t >= t0() - slack && t <= t_end() + slack)) {
    throw std::out_of_range("trajectory: t = " + std::to_string(t) + " outside [" +
                            std::to_string(t0()) + ", " + std::to_string(t_end()) + "]");
  }
  const double pos = std::clamp((t - t0()) / h, 0.0, static_cast<double>(nodes_.size() - 1));
  auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= nodes_.size()) return {nodes_.back().x, nodes_.back().y};
  const double s = pos - static_cast<double>(i);
  const auto& a = nodes_[i];
  if (s == 0.0) return {a.x, a.y};
  const auto& b = nodes_[i + 1];
  return {hermite(a.x, a.dx, b.x, b.dx, h, s), hermite(a.y, a.dy, b.y, b.dy, h, s)};
}

Trajectory integrate(const ModelParams& params, const HistoryState& history, double t_end,
                     std::size_t steps_per_delay) {
  const double tau = params.tau();
  if (steps_per_delay < kMinStepsPerDelay) {
    throw std::invalid_argument("integrate: steps_per_delay must be >= 8");
  }
  if (std::abs(history.tau() - tau) > 1e-12 * tau) {
    throw std::invalid_argument("integrate: history spans a different delay than params");
  }
  if (!(t_end > tau)) throw std::invalid_argument("integrate: t_end must exceed tau");

  const std::size_t m = steps_per_delay;
  const double h = tau / static_cast<double>(m);
  const auto steps = static_cast<std::size_t>(std::ceil((t_end - tau) / h - 1e-9));

  std::vector<TrajectoryNode> nodes;
  nodes.reserve(steps + 1);
  {
    const double x = history(tau);
    const double y = history.y_tau();
    const Rates r = vector_field(params, history(0.0), x, y);
    nodes.push_back({tau, x, y, r.dx, r.dy});
  }

  for (std::size_t n = 0; n < steps; ++n) {
    // X(t - tau) at the middle and end of the step.
    // k1 reuses the derivative stored at the current node.
    double lag_mid, lag1;
    if (n < m) {
      const double theta = h * static_cast<double>(n);
      lag_mid = history(theta + 0.5 * h);
      lag1 = history(std::min(theta + h, tau));
    } else {
      const auto& a = nodes[n - m];
      const auto& b = nodes[n - m + 1];
      lag_mid = hermite(a.x, a.dx, b.x, b.dx, h, 0.5);
      lag1 = b.x;
    }

    const auto& cur = nodes[n];
    const Rates k1{cur.dx, cur.dy};
    const Rates k2 =
        vector_field(params, lag_mid, cur.x + 0.5 * h * k1.dx, cur.y + 0.5 * h * k1.dy);
    const Rates k3 =
        vector_field(params, lag_mid, cur.x + 0.5 * h * k2.dx, cur.y + 0.5 * h * k2.dy);
    const Rates k4 = vector_field(params, lag1, cur.x + h * k3.dx, cur.y + h * k3.dy);

    const double t = tau + h * static_cast<double>(n + 1);
    const double x =
        settle(cur.x + h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx), t, "prey");
    const double y =
        settle(cur.y + h / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy), t, "predator");
    const Rates r = vector_field(params, lag1, x, y);
    nodes.push_back({t, x, y, r.dx, r.dy});
  }
  return {params, steps_per_delay, std::move(nodes)};
}

AgeProfile::AgeProfile(double a_max, std::vector<double> samples)
    : a_max_(a_max), samples_(std::move(samples)) {
  if (!std::isfinite(a_max) || !(a_max > 0.0)) {
    throw std::invalid_argument("age profile: a_max must be finite and > 0");
  }
  if (samples_.size() < 2) throw std::invalid_argument("age profile: need at least 2 samples");
  for (double v : samples_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("age profile: samples must be finite and >= 0");
    }
  }
}

double AgeProfile::operator()(double a) const {
  if (a < 0.0 || a > a_max_) return 0.0;
  const double pos = a / spacing();
  auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= samples_.size()) return samples_.back();
  const double s = pos - static_cast<double>(i);
  return (1.0 - s) * samples_[i] + s * samples_[i + 1];
}

double AgeProfile::integral(double lo, double hi) const {
  lo = std::max(lo, 0.0);
  hi = std::min(hi, a_max_);
  if (!(hi > lo)) return 0.0;
  const double h = spacing();
  const auto first = static_cast<std::size_t>(std::ceil(lo / h));
  const auto last = static_cast<std::size_t>(std::floor(hi / h));
  if (first > last) return 0.5 * ((*this)(lo) + (*this)(hi)) * (hi - lo);
  double sum = 0.5 * ((*this)(lo) + samples_[first]) * (h * static_cast<double>(first) - lo);
  for (std::size_t i = first; i < last; ++i) sum += 0.5 * (samples_[i] + samples_[i + 1]) * h;
  sum += 0.5 * (samples_[last] + (*this)(hi)) * (hi - h * static_cast<double>(last));
  return sum;
}

Prelude prelude_from_pde(const ModelParams& params, const AgeProfile& x0, double y0,
                         std::size_t intervals) {
  const double tau = params.tau();
  if (x0.a_max() < 2.0 * tau) {
    throw std::invalid_argument("prelude: age profile must extend to at least 2 tau");
  }
  if (!std::isfinite(y0) || y0 < 0.0) throw std::invalid_argument("prelude: y0 must be >= 0");
  if (intervals < kMinStepsPerDelay) throw std::invalid_argument("prelude: need >= 8 intervals");

  const double mu0 = params.mu0();
  const double beta0 = params.beta0();
  const double gamma0 = params.gamma0();
  // Density reaching age tau at time t < tau: survivors of x0(tau - t).
  auto maturing = [&](double t) { return std::exp(-mu0 * t) * x0(tau - t); };

  struct S {
    double phi, psi, y;
  };
  auto rhs = [&](double t, const S& s) {
    const double m = maturing(t);
    return S{m - mu0 * s.phi - gamma0 * s.phi * s.y, beta0 * s.phi - m - mu0 * s.psi,
             params.alpha() * gamma0 * s.phi * s.y - params.delta() * s.y};
  };

  const double h = tau / static_cast<double>(intervals);
  std::vector<double> phi(intervals + 1), dphi(intervals + 1), psi(intervals + 1),
      pred(intervals + 1);
  S s{x0.integral(tau, x0.a_max()), x0.integral(0.0, tau), y0};
  for (std::size_t n = 0;; ++n) {
    const double t = h * static_cast<double>(n);
    const S k1 = rhs(t, s);
    phi[n] = s.phi;
    dphi[n] = k1.phi;
    psi[n] = s.psi;
    pred[n] = s.y;
    if (n == intervals) break;
    auto add = [](const S& a, const S& k, double w) {
      return S{a.phi + w * k.phi, a.psi + w * k.psi, a.y + w * k.y};
    };
    const S k2 = rhs(t + 0.5 * h, add(s, k1, 0.5 * h));
    const S k3 = rhs(t + 0.5 * h, add(s, k2, 0.5 * h));
    const S k4 = rhs(t + h, add(s, k3, h));
    s = S{s.phi + h / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi),
          s.psi + h / 6.0 * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi),
          s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y)};
    s.phi = settle(s.phi, t + h, "prelude prey");
    s.y = settle(s.y, t + h, "prelude predator");
  }
  const double y_tau = pred.back();
  return {HistoryState(tau, std::move(phi), std::move(dphi), y_tau), std::move(psi),
          std::move(pred)};
}

}  // namespace dlv
