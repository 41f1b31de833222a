#include <doctest.h>

#include <cmath>

#include "dlv/lyapunov.hpp"
#include "dlv/model.hpp"
#include "dlv/planar.hpp"
#include "fixtures.hpp"

using namespace dlv;

TEST_CASE("g examples") {
  CHECK(g(1.0) == 0.0);
  CHECK(g(std::exp(1.0)) == doctest::Approx(0.718281828459045).epsilon(1e-14));
  CHECK(g(1e-8) == doctest::Approx(17.420680753952365).epsilon(1e-14));
  CHECK(g(1.0 + 1e-9) == doctest::Approx(0.5e-18).epsilon(1e-6));
  CHECK(g(0.3) > g(0.4));
  CHECK(g(3.0) > g(2.0));
  CHECK_THROWS_AS(g(0.0), std::domain_error);
  CHECK_THROWS_AS(g(-1.0), std::domain_error);
  CHECK_THROWS_AS(g(1e-301), std::domain_error);
}

TEST_CASE("functional of simple windows") {
  const ModelParams p = fixtures::fig1();
  const auto e = require_coexistence(p);
  const auto at_star = evaluate(p, HistoryState::constant(p.tau(), 32, e.x, e.y));
  CHECK(at_star.total == 0.0);
  const auto v2_only = evaluate(p, HistoryState::constant(p.tau(), 32, e.x, 2.0 * e.y));
  CHECK(v2_only.v1 == 0.0);
  CHECK(v2_only.v3 == 0.0);
  CHECK(v2_only.total == doctest::Approx(e.y * (1.0 - std::log(2.0))).epsilon(1e-14));
  // V3 of a constant window: alpha B X* tau g(c).
  const auto c = evaluate(p, HistoryState::constant(p.tau(), 32, 2.0 * e.x, e.y));
  CHECK(c.v3 == doctest::Approx(p.alpha() * p.recruitment() * e.x * p.tau() * g(2.0)));
  CHECK_THROWS_AS(evaluate(p, HistoryState::constant(p.tau(), 32, 0.0, e.y)), std::domain_error);
  CHECK_THROWS_AS(evaluate(p, HistoryState::constant(p.tau(), 32, e.x, 0.0)), std::domain_error);
}

TEST_CASE("functional vanishes only at E*") {
  const ModelParams p = fixtures::fig2();
  const auto e = require_coexistence(p);
  CHECK(evaluate(p, HistoryState::constant(p.tau(), 32, e.x * (1 + 1e-6), e.y)).total > 0.0);
  CHECK(evaluate(p, HistoryState::constant(p.tau(), 32, e.x, e.y * (1 - 1e-6))).total > 0.0);
}

TEST_CASE("energy series at E* is identically zero") {
  const ModelParams p = fixtures::fig1();
  const auto e = require_coexistence(p);
  const auto traj = integrate(p, HistoryState::constant(p.tau(), 64, e.x, e.y), 30.0, 64);
  const auto series = energy_series(p, traj);
  REQUIRE_FALSE(series.empty());
  CHECK(series.front().t == doctest::Approx(2.0 * p.tau()));
  for (const auto& s : series) {
    REQUIRE(std::abs(s.f) <= 1e-14);
    REQUIRE(s.analytic_df == 0.0);
  }
  CHECK(derivative_check(p, traj) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("energy decreases to zero after a predator kick") {
  const ModelParams p = fixtures::fig1();
  const auto e = require_coexistence(p);
  // The slowest mode decays at 0.0032 per unit time, hence the long run.
  const auto traj = integrate(p, HistoryState::constant(p.tau(), 256, e.x, e.y + 1.0), 2500.0, 256);
  const auto series = energy_series(p, traj);
  const double slack = 1e-8 * std::max(1.0, series.front().f);
  for (std::size_t k = 1; k < series.size(); ++k) {
    REQUIRE(series[k].f <= series[k - 1].f + slack);
    REQUIRE(series[k].analytic_df <= 0.0);
  }
  CHECK(series.back().f < 1e-4 * series.front().f);
  CHECK(derivative_check(p, traj) <= 1e-3);
}

TEST_CASE("node functional agrees with the series and the level-set bound") {
  const ModelParams p = fixtures::fig1();
  const auto e = require_coexistence(p);
  const auto traj = integrate(p, HistoryState::constant(p.tau(), 64, 1.5 * e.x, 0.5 * e.y), 60.0, 64);
  const auto series = energy_series(p, traj);
  CHECK(evaluate_at_node(p, traj, 64 + 100).total == doctest::Approx(series[100].f).epsilon(1e-12));
  CHECK_THROWS_AS(evaluate_at_node(p, traj, 10), std::out_of_range);
  const double bound = series.front().f / (p.alpha() * e.x);
  for (const auto& n : traj.nodes()) {
    if (n.t >= 2.0 * p.tau()) REQUIRE(g(n.x / e.x) <= bound * (1 + 1e-9));
  }
}

TEST_CASE("derivative check converges at fourth order away from breakpoints") {
  const ModelParams p = fixtures::fig1();
  const auto e = require_coexistence(p);
  auto phi = [&](double a) { return e.x * (1.4 + 0.3 * std::sin(2.0 * a)); };
  double err[2];
  const std::size_t ms[2] = {128, 256};
  for (int i = 0; i < 2; ++i) {
    const auto h = HistoryState::from_function(p.tau(), 1024, phi, 0.6 * e.y);
    err[i] = derivative_check(p, integrate(p, h, 80.0, ms[i]));
  }
  CHECK(err[0] / err[1] >= 8.0);
}

TEST_CASE("late start skips windows with vanishing prey") {
  const ModelParams p = fixtures::fig1();
  // phi vanishes at tau, so X(tau) = 0 and the first window holds a zero.
  const auto hist = HistoryState::from_function(
      p.tau(), 64, [](double a) { return std::max(1.5 - a, 0.0); }, 1.0);
  const auto traj = integrate(p, hist, 30.0, 64);
  CHECK(traj.nodes()[0].x == 0.0);
  CHECK_THROWS_AS(energy_series(p, traj), std::domain_error);
  const auto late = energy_series(p, traj, 64 + 1);
  CHECK(late.front().t == doctest::Approx(traj.nodes()[65].t));
  CHECK_THROWS_AS(energy_series(p, traj, 10), std::invalid_argument);
}

TEST_CASE("functional is constant on the periodic orbit") {
  const ModelParams p = fixtures::fig2();
  const auto orbit = find_periodic_orbit(p, 2048);
  REQUIRE(orbit.has_value());
  const auto traj = integrate(p, orbit->as_history(), 40.0, 2048);
  const auto series = energy_series(p, traj);
  for (const auto& s : series) REQUIRE(std::abs(s.f - orbit->energy) <= 1e-6);
}
