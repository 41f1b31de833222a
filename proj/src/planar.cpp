#include "dlv/planar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dlv/hermite.hpp"
#include "dlv/lyapunov.hpp"
#include "dlv/model.hpp"

namespace dlv {

namespace {

constexpr std::size_t kStepsPerLinearPeriod = 4096;
constexpr std::size_t kMaxSteps = kStepsPerLinearPeriod * 2000;
constexpr double kEventTolerance = 1e-12;
constexpr double kPeriodTolerance = 1e-10;
constexpr double kEnergyCap = 1e6;

struct Point {
  double x;
  double y;
};

Point field(const PlanarParams& pp, const Point& s) {
  return {s.x * (pp.a - pp.b * s.y), s.y * (pp.c * s.x - pp.d)};
}

Point rk4(const PlanarParams& pp, const Point& s, const Point& k1, double h) {
  const Point k2 = field(pp, {s.x + 0.5 * h * k1.x, s.y + 0.5 * h * k1.y});
  const Point k3 = field(pp, {s.x + 0.5 * h * k2.x, s.y + 0.5 * h * k2.y});
  const Point k4 = field(pp, {s.x + h * k3.x, s.y + h * k3.y});
  return {s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
          s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y)};
}

// Solves g(u) = level on the branch u > 1 (upper) or 0 < u < 1 (lower).
double invert_g(double level, bool upper) {
  double lo, hi;
  if (upper) {
    lo = 1.0;
    hi = 2.0;
    while (g(hi) < level) hi *= 2.0;
  } else {
    lo = 0.5;
    hi = 1.0;
    while (g(lo) < level) lo *= 0.5;
  }
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi;
       ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool above = g(mid) > level;
    // g increases on the upper branch and decreases on the lower one.
    if (above == upper) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

PlanarParams PlanarParams::make(double a, double b, double c, double d) {
  for (double v : {a, b, c, d}) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw std::invalid_argument("planar rates must be finite and > 0");
    }
  }
  return {a, b, c, d};
}

PlanarParams PlanarParams::from_model(const ModelParams& p) {
  const Equilibrium e = require_coexistence(p);
  return make(p.gamma0() * e.y, p.gamma0(), p.alpha() * p.gamma0(), p.delta());
}

double PlanarParams::linear_period() const { return 2.0 * std::numbers::pi / std::sqrt(a * d); }

double energy(const PlanarParams& pp, double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw std::domain_error("planar energy: x and y must be > 0");
  return pp.d * g(pp.c * x / pp.d) + pp.a * g(pp.b * y / pp.a);
}

PeriodMeasurement measure_period(const PlanarParams& pp, double energy_level) {
  if (!std::isfinite(energy_level) || !(energy_level > 0.0)) {
    throw std::invalid_argument("period: energy level must be > 0");
  }
  const double section = pp.y_star();
  const Point start{pp.x_star() * invert_g(energy_level / pp.d, true), section};
  const double e0 = energy(pp, start.x, start.y);
  const double h = pp.linear_period() / static_cast<double>(kStepsPerLinearPeriod);

  Point s = start;
  Point ds = field(pp, s);
  double drift = 0.0;
  for (std::size_t n = 0; n < kMaxSteps; ++n) {
    const Point next = rk4(pp, s, ds, h);
    const Point dnext = field(pp, next);
    drift = std::max(drift, std::abs(energy(pp, next.x, next.y) - e0) / e0);
    if (s.y < section && next.y >= section && next.x > pp.x_star()) {
      double lo = 0.0, hi = 1.0;
      while ((hi - lo) * h > kEventTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (hermite(s.y, ds.y, next.y, dnext.y, h, mid) < section) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return {h * (static_cast<double>(n) + 0.5 * (lo + hi)), drift, n + 1};
    }
    s = next;
    ds = dnext;
  }
  throw std::runtime_error("period: no return to the section within " +
                           std::to_string(kMaxSteps) + " steps at energy " +
                           std::to_string(energy_level));
}

std::pair<double, double> PeriodicOrbit::at(double t) const {
  double u = std::fmod(t - t0, period);
  if (u < 0.0) u += period;
  const double h = spacing();
  const double pos = u / h;
  auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= p.size()) i = p.size() - 2;
  const double s = pos - static_cast<double>(i);
  return {hermite(p[i], dp[i], p[i + 1], dp[i + 1], h, s),
          hermite(q[i], dq[i], q[i + 1], dq[i + 1], h, s)};
}

HistoryState PeriodicOrbit::as_history() const { return {period, p, dp, q.front()}; }

std::optional<PeriodicOrbit> find_periodic_orbit(const ModelParams& params,
                                                 std::size_t samples) {
  if (samples < 8) throw std::invalid_argument("find_periodic_orbit: need >= 8 samples");
  if (!(periodicity_index(params) > 1.0)) return std::nullopt;

  const PlanarParams pp = PlanarParams::from_model(params);
  const double tau = params.tau();
  auto residual = [&](double level) { return period(pp, level) - tau; };

  // T increases from 2 pi / sqrt(ad) < tau, so the lower end is near zero.
  const double scale = pp.a + pp.d;
  double lo = 1e-8 * scale;
  double f_lo = residual(lo);
  double hi = scale;
  double f_hi = residual(hi);
  while (f_hi < 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    if (hi > kEnergyCap) {
      throw std::runtime_error("find_periodic_orbit: T(E) stays below tau up to E = 1e6");
    }
    f_hi = residual(hi);
  }

  // Illinois regula falsi, bisecting whenever the secant point is poor.
  double level = hi;
  double f = f_hi;
  int side = 0;
  for (int it = 0; it < 200 && std::abs(f) > kPeriodTolerance; ++it) {
    double trial = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(trial > lo && trial < hi)) trial = 0.5 * (lo + hi);
    level = trial;
    f = residual(level);
    if (f < 0.0) {
      lo = level;
      f_lo = f;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = level;
      f_hi = f;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
    if (hi - lo <= 1e-15 * hi) break;
  }

  // Sample one revolution starting where p = X* on the lower branch of q.
  const Point start{pp.x_star(), pp.y_star() * invert_g(level / pp.a, false)};
  const double t_ref = pp.linear_period() / static_cast<double>(kStepsPerLinearPeriod);
  const auto substeps = static_cast<std::size_t>(
      std::max(1.0, std::ceil(tau / t_ref / static_cast<double>(samples))));
  const double h = tau / static_cast<double>(samples * substeps);

  PeriodicOrbit orbit{tau, tau, 0.0, level, 0.0, {}, {}, {}, {}};
  orbit.p.reserve(samples + 1);
  Point s = start;
  Point ds = field(pp, s);
  for (std::size_t i = 0;; ++i) {
    orbit.p.push_back(s.x);
    orbit.q.push_back(s.y);
    orbit.dp.push_back(ds.x);
    orbit.dq.push_back(ds.y);
    if (i == samples) break;
    for (std::size_t k = 0; k < substeps; ++k) {
      s = rk4(pp, s, ds, h);
      ds = field(pp, s);
    }
  }
  orbit.closure_residual = std::hypot(s.x - start.x, s.y - start.y);
  orbit.energy = evaluate(params, orbit.as_history()).total;
  return orbit;
}

}  // namespace dlv
