#include "dlv/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dlv/model.hpp"

namespace dlv {

namespace {
constexpr double kArgumentFloor = 1e-300;

struct Scales {
  double x_star;
  double y_star;
  double v1;  // alpha X*
  double v3;  // alpha beta0 e^{-mu0 tau} X*
};

Scales scales(const ModelParams& p) {
  const Equilibrium e = require_coexistence(p);
  return {e.x, e.y, p.alpha() * e.x, p.alpha() * p.recruitment() * e.x};
}

// d/ds g(X(s) / X*) from the stored slope. The window integral uses the
// trapezoid rule with its h^2 / 12 endpoint correction: plain trapezoid error
// oscillates with the window and breaks node-to-node monotonicity of F.
double g_rate(double x, double dx, double x_star) { return (1.0 / x_star - 1.0 / x) * dx; }

double end_correction(double h, double rate_lo, double rate_hi) {
  return -h * h / 12.0 * (rate_hi - rate_lo);
}
}  // namespace

double g(double x) {
  if (!(x >= kArgumentFloor)) {
    throw std::domain_error("g: argument " + std::to_string(x) + " outside (0, inf)");
  }
  const double u = x - 1.0;
  if (std::abs(u) < 0.5) return u - std::log1p(u);
  return x - std::log(x) - 1.0;
}

LyapunovValue evaluate(const ModelParams& params, const HistoryState& window) {
  const Scales s = scales(params);
  const auto v = window.values();
  if (std::any_of(v.begin(), v.end(), [](double x) { return !(x > 0.0); }) ||
      !(window.y_tau() > 0.0)) {
    throw std::domain_error("lyapunov: window must be strictly positive");
  }
  double integral = 0.5 * (g(v.front() / s.x_star) + g(v.back() / s.x_star));
  for (std::size_t i = 1; i + 1 < v.size(); ++i) integral += g(v[i] / s.x_star);
  integral *= window.spacing();
  const auto d = window.slopes();
  integral += end_correction(window.spacing(), g_rate(v.front(), d.front(), s.x_star),
                             g_rate(v.back(), d.back(), s.x_star));
  LyapunovValue out{s.v1 * g(v.back() / s.x_star), s.y_star * g(window.y_tau() / s.y_star),
                    s.v3 * integral, 0.0};
  out.total = out.v1 + out.v2 + out.v3;
  return out;
}

LyapunovValue evaluate_at_node(const ModelParams& params, const Trajectory& traj,
                               std::size_t k) {
  const std::size_t m = traj.steps_per_delay();
  const auto nodes = traj.nodes();
  if (k < m || k >= nodes.size()) {
    throw std::out_of_range("lyapunov: node " + std::to_string(k) +
                            " has no full delay window inside the trajectory");
  }
  const Scales s = scales(params);
  auto gx = [&](std::size_t j) { return g(nodes[j].x / s.x_star); };
  double integral = 0.5 * (gx(k - m) + gx(k));
  for (std::size_t j = k - m + 1; j < k; ++j) integral += gx(j);
  integral *= traj.step();
  integral += end_correction(traj.step(), g_rate(nodes[k - m].x, nodes[k - m].dx, s.x_star),
                             g_rate(nodes[k].x, nodes[k].dx, s.x_star));
  LyapunovValue out{s.v1 * gx(k), s.y_star * g(nodes[k].y / s.y_star), s.v3 * integral, 0.0};
  out.total = out.v1 + out.v2 + out.v3;
  return out;
}

std::vector<EnergySample> energy_series(const ModelParams& params, const Trajectory& traj) {
  return energy_series(params, traj, traj.steps_per_delay());
}

std::vector<EnergySample> energy_series(const ModelParams& params, const Trajectory& traj,
                                        std::size_t first) {
  const std::size_t m = traj.steps_per_delay();
  const auto nodes = traj.nodes();
  if (first < m) throw std::invalid_argument("energy_series: first node inside the history");
  if (nodes.size() <= first) return {};
  const Scales s = scales(params);
  const double h = traj.step();

  std::vector<double> gx(nodes.size());
  for (std::size_t j = first - m; j < nodes.size(); ++j) {
    if (!(nodes[j].x > 0.0)) {
      throw std::domain_error("energy_series: prey vanishes at t = " +
                              std::to_string(nodes[j].t));
    }
    gx[j] = g(nodes[j].x / s.x_star);
  }

  std::vector<EnergySample> out;
  out.reserve(nodes.size() - first);
  // Trapezoid over the window, maintained as an interior sum plus end halves.
  double interior = 0.0;
  for (std::size_t j = first - m + 1; j < first; ++j) interior += gx[j];
  for (std::size_t k = first; k < nodes.size(); ++k) {
    if (k > first) interior += gx[k - 1] - gx[k - m];
    const double integral =
        h * (interior + 0.5 * (gx[k - m] + gx[k])) +
        end_correction(h, g_rate(nodes[k - m].x, nodes[k - m].dx, s.x_star),
                       g_rate(nodes[k].x, nodes[k].dx, s.x_star));
    if (!(nodes[k].y > 0.0)) {
      throw std::domain_error("energy_series: predator vanishes at t = " +
                              std::to_string(nodes[k].t));
    }
    const double f = s.v1 * gx[k] + s.y_star * g(nodes[k].y / s.y_star) + s.v3 * integral;
    const double df = -s.v3 * g(nodes[k - m].x / nodes[k].x);
    out.push_back({nodes[k].t, f, df});
  }
  return out;
}

double derivative_check(std::span<const EnergySample> series, double h, double tau) {
  // Sixth-order central differences, so the truncation error stays below
  // the O(h^4) accuracy of F itself even where F varies fast. Stencils
  // spanning a breakpoint t = n tau (n = 3, 4) are skipped: the third and
  // fourth derivatives of F jump there, inherited from the slope jump of X
  // at t = tau, and a stencil across them measures its own truncation error
  // instead of the identity.
  auto spans_breakpoint = [&](double lo, double hi) {
    for (int n = 3; n <= 4; ++n) {
      const double b = n * tau;
      if (lo < b - 1e-9 * h && b + 1e-9 * h < hi) return true;
    }
    return false;
  };
  double scale = 0.0;
  for (const auto& s : series) scale = std::max(scale, std::abs(s.analytic_df));
  double worst = 0.0;
  for (std::size_t k = 3; k + 3 < series.size(); ++k) {
    if (spans_breakpoint(series[k - 3].t, series[k + 3].t)) continue;
    const double fd = (45.0 * (series[k + 1].f - series[k - 1].f) -
                       9.0 * (series[k + 2].f - series[k - 2].f) +
                       (series[k + 3].f - series[k - 3].f)) /
                      (60.0 * h);
    worst = std::max(worst, std::abs(fd - series[k].analytic_df));
  }
  return scale > 0.0 ? worst / scale : worst;
}

double derivative_check(const ModelParams& params, const Trajectory& traj) {
  const auto series = energy_series(params, traj);
  return derivative_check(series, traj.step(), params.tau());
}

}  // namespace dlv
