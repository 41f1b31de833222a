#include "dlv/pde.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dlv/hermite.hpp"
#include "dlv/model.hpp"

namespace dlv {

namespace {

constexpr double kUndershootTolerance = 1e-10;
constexpr double kTailDecay = 30.0;

double checked(double v, double t, const char* what) {
  if (!std::isfinite(v)) {
    throw std::runtime_error(std::string("pde: non-finite ") + what + " at t = " +
                             std::to_string(t));
  }
  if (v < 0.0) {
    if (v < -kUndershootTolerance) {
      throw std::runtime_error(std::string("pde: negative ") + what + " at t = " +
                               std::to_string(t));
    }
    return 0.0;
  }
  return v;
}

}  // namespace

PdeGrid PdeGrid::make(const ModelParams& p, std::size_t per_delay) {
  const auto e = coexistence(p);
  const double rate = p.mu0() + (e ? p.gamma0() * e->y : 0.0);
  return make(p, per_delay, p.tau() + kTailDecay / rate);
}

PdeGrid PdeGrid::make(const ModelParams& p, std::size_t per_delay, double a_max) {
  if (per_delay < 2) throw std::invalid_argument("pde grid: need >= 2 nodes per delay");
  const double da = p.tau() / static_cast<double>(per_delay);
  a_max = std::max(a_max, 2.0 * p.tau());
  const auto intervals = static_cast<std::size_t>(std::ceil(a_max / da - 1e-9));
  return {per_delay, intervals + 1, da};
}

double grid_integral(const PdeGrid& grid, std::span<const double> x, std::size_t lo,
                     std::size_t hi) {
  if (hi <= lo) return 0.0;
  if (hi - lo < 6) {
    double sum = 0.5 * (x[lo] + x[hi]);
    for (std::size_t i = lo + 1; i < hi; ++i) sum += x[i];
    return sum * grid.da;
  }
  // Gregory end weights 3/8, 7/6, 23/24: trapezoid plus a fourth-order end
  // correction. Plain trapezoid leaves an O(da^2) bias in the adult mass that
  // moves the discrete fixed point off E2 and drives the predator.
  double sum = 0.375 * (x[lo] + x[hi]) + (7.0 / 6.0) * (x[lo + 1] + x[hi - 1]) +
               (23.0 / 24.0) * (x[lo + 2] + x[hi - 2]);
  for (std::size_t i = lo + 3; i + 2 < hi; ++i) sum += x[i];
  return sum * grid.da;
}

double adult_mass(const PdeGrid& grid, const PdeState& s) {
  return grid_integral(grid, s.x, grid.per_delay, grid.nodes - 1);
}

double juvenile_mass(const PdeGrid& grid, const PdeState& s) {
  return grid_integral(grid, s.x, 0, grid.per_delay);
}

PdeState step(const ModelParams& params, const PdeGrid& grid, const PdeState& state) {
  if (state.x.size() != grid.nodes) throw std::invalid_argument("pde: state does not fit grid");
  const double dt = grid.da;
  const std::size_t adult = grid.per_delay;
  const double uptake = params.alpha() * params.gamma0();

  const double prey_now = adult_mass(grid, state);
  const double growth_now = uptake * prey_now - params.delta();
  const double y_mid = state.y * std::exp(0.5 * dt * growth_now);

  PdeState next{state.t + dt, std::vector<double>(grid.nodes), 0.0};
  const double juvenile_decay = std::exp(-params.mu0() * dt);
  const double adult_decay = std::exp(-(params.mu0() + params.gamma0() * y_mid) * dt);
  for (std::size_t i = 1; i < grid.nodes; ++i) {
    next.x[i] = state.x[i - 1] * (i - 1 >= adult ? adult_decay : juvenile_decay);
  }
  const double prey_next = adult_mass(grid, next);
  next.x[0] = params.beta0() * prey_next;

  const double slope_now = state.y * growth_now;
  const double y_pred = state.y + dt * slope_now;
  const double slope_next = y_pred * (uptake * prey_next - params.delta());
  next.y = checked(state.y + 0.5 * dt * (slope_now + slope_next), next.t, "predator density");
  checked(next.x[0], next.t, "birth flux");
  return next;
}

PdeState initial_state(const PdeGrid& grid, const AgeProfile& x0, double y0) {
  if (!std::isfinite(y0) || y0 < 0.0) throw std::invalid_argument("pde: y0 must be >= 0");
  PdeState s{0.0, std::vector<double>(grid.nodes), y0};
  for (std::size_t i = 0; i < grid.nodes; ++i) s.x[i] = x0(grid.da * static_cast<double>(i));
  return s;
}

AgeProfile bump_profile(const ModelParams& params, const PdeGrid& grid, double amplitude) {
  if (!std::isfinite(amplitude) || amplitude < 0.0) {
    throw std::invalid_argument("pde: bump amplitude must be >= 0");
  }
  const double tau = params.tau();
  const double a_max = grid.a_max();
  // Tail rate m with beta0 e^{-m tau} / m <= 1/2, so K below stays positive.
  double m = params.mu0() + 1.0 / tau;
  while (params.beta0() * std::exp(-m * tau) / m > 0.5) m *= 2.0;
  const double tail_adult = (std::exp(-m * tau) - std::exp(-m * a_max)) / m;
  // x0(0) = K must equal beta0 times the adult mass A tau / 2 + K tail_adult.
  const double k = params.beta0() * amplitude * 0.5 * tau / (1.0 - params.beta0() * tail_adult);
  std::vector<double> x(grid.nodes);
  for (std::size_t i = 0; i < grid.nodes; ++i) {
    const double a = grid.da * static_cast<double>(i);
    const double s = a <= 2.0 * tau ? std::sin(std::numbers::pi * a / (2.0 * tau)) : 0.0;
    x[i] = amplitude * s * s + k * std::exp(-m * a);
  }
  return AgeProfile(a_max, std::move(x));
}

double e2_density(const ModelParams& params, double a) {
  const Equilibrium e = require_coexistence(params);
  const double x0 = params.beta0() * e.x;
  const double tau = params.tau();
  if (a <= tau) return x0 * std::exp(-params.mu0() * a);
  return x0 * std::exp(-params.mu0() * a - params.gamma0() * e.y * (a - tau));
}

PdeEquilibrium equilibrium_e2(const ModelParams& params, const PdeGrid& grid) {
  const Equilibrium e = require_coexistence(params);
  PdeEquilibrium out{std::vector<double>(grid.nodes), e.y, params.beta0() * e.x};
  for (std::size_t i = 0; i < grid.nodes; ++i) {
    out.profile[i] = e2_density(params, grid.da * static_cast<double>(i));
  }
  return out;
}

PdeRun simulate_pde(const ModelParams& params, const PdeGrid& grid, PdeState initial,
                    double t_end, const std::function<void(const PdeState&)>& observer) {
  const auto steps = static_cast<std::size_t>(std::ceil((t_end - initial.t) / grid.da - 1e-9));
  PdeRun run{std::move(initial), {}};
  run.series.reserve(steps + 1);
  auto record = [&](const PdeState& s) {
    run.series.push_back(
        {s.t, adult_mass(grid, s), juvenile_mass(grid, s), s.y, s.x[grid.per_delay]});
    if (observer) observer(s);
  };
  record(run.final);
  for (std::size_t n = 0; n < steps; ++n) {
    run.final = step(params, grid, run.final);
    record(run.final);
  }
  return run;
}

HistoryState reduce_to_dde(const ModelParams& params, const PdeGrid& grid,
                           std::span<const PdeSample> series, std::size_t intervals) {
  const std::size_t m = grid.per_delay;
  if (series.size() < m + 1) {
    throw std::invalid_argument("reduce_to_dde: PDE run does not cover [0, tau]");
  }
  auto slope = [&](const PdeSample& s) {
    return s.maturing - params.mu0() * s.adult - params.gamma0() * s.y * s.adult;
  };
  std::vector<double> values(intervals + 1), slopes(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    const double pos = static_cast<double>(k * m) / static_cast<double>(intervals);
    auto i = static_cast<std::size_t>(pos);
    if (i >= m) i = m - 1;
    const double s = pos - static_cast<double>(i);
    const auto& a = series[i];
    const auto& b = series[i + 1];
    const double da = slope(a);
    const double db = slope(b);
    values[k] = std::max(0.0, hermite(a.adult, da, b.adult, db, grid.da, s));
    slopes[k] = hermite_slope(a.adult, da, b.adult, db, grid.da, s);
  }
  return {params.tau(), std::move(values), std::move(slopes), series[m].y};
}

}  // namespace dlv
