#include "dlv/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include <fmt/format.h>

#include "dlv/dde.hpp"
#include "dlv/io.hpp"
#include "dlv/lyapunov.hpp"
#include "dlv/pde.hpp"
#include "dlv/planar.hpp"

namespace dlv {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

template <class F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

fs::path resolve(const fs::path& base, const fs::path& p) {
  if (p.empty() || p.is_absolute()) return p;
  return base / p;
}

double level(const std::optional<double>& abs, const std::optional<double>& rel, double unit,
             double fallback, const char* what) {
  if (abs && rel) throw std::invalid_argument(fmt::format("give either {0} or {0}_rel", what));
  const double v = abs ? *abs : rel ? *rel * unit : fallback;
  if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument(fmt::format("{} must be >= 0", what));
  return v;
}

struct Initial {
  explicit Initial(HistoryState h) : history(std::move(h)) {}

  HistoryState history;
  std::optional<AgeProfile> profile;
  std::optional<PdeGrid> grid;
  double y0 = 0.0;
  std::optional<PeriodicOrbit> orbit;
};

Initial build_initial(const ScenarioConfig& c) {
  const ModelParams& p = c.params;
  const auto star = coexistence(p);
  const double x_unit = star ? star->x : 1.0;
  const double y_unit = star ? star->y : 1.0;
  const InitialSpec& spec = c.initial;

  switch (spec.kind) {
    case InitialKind::history: {
      const double y_tau = level(spec.y0, spec.y0_rel, y_unit, 0.0, "y0");
      if (spec.profile == "constant") {
        const double v = level(spec.value, spec.value_rel, x_unit, x_unit, "value");
        return Initial(HistoryState::constant(p.tau(), c.steps_per_delay, v, y_tau));
      }
      if (spec.profile == "csv") return Initial(io::history_from_csv(spec.csv, p.tau(), y_tau));
      throw std::invalid_argument("unknown history profile '" + spec.profile + "'");
    }
    case InitialKind::pde: {
      const PdeGrid grid = PdeGrid::make(p, c.pde_per_delay);
      const double y0 = level(spec.y0, spec.y0_rel, y_unit, 0.0, "y0");
      std::optional<AgeProfile> x0;
      if (spec.profile == "bump") {
        const double unit = p.beta0() * x_unit;
        x0 = bump_profile(p, grid, level(spec.value, spec.value_rel, unit, unit, "value"));
      } else if (spec.profile == "csv") {
        x0 = io::profile_from_csv(spec.csv);
      } else {
        throw std::invalid_argument("unknown age profile '" + spec.profile + "'");
      }
      Prelude pre = prelude_from_pde(p, *x0, y0, c.pde_per_delay);
      Initial out(std::move(pre.history));
      out.profile = std::move(x0);
      out.grid = grid;
      out.y0 = y0;
      return out;
    }
    case InitialKind::orbit: {
      auto orbit = find_periodic_orbit(p, c.steps_per_delay);
      if (!orbit) throw std::domain_error("no tau-periodic orbit: periodicity index <= 1");
      if (!star) throw std::domain_error("orbit start needs R0 > 1");
      const double q0 = orbit->q.front();
      const double y_tau = q0 + spec.y_shift_toward_star * (star->y - q0);
      HistoryState h(p.tau(), orbit->p, orbit->dp, y_tau);
      Initial out(std::move(h));
      out.orbit = std::move(orbit);
      return out;
    }
  }
  throw std::invalid_argument("unknown initial kind");
}

double max_increase(std::span<const EnergySample> series, bool& monotone) {
  double worst = 0.0;
  monotone = true;
  for (std::size_t k = 1; k < series.size(); ++k) {
    const double up = series[k].f - series[k - 1].f;
    worst = std::max(worst, up);
    if (up > 1e-8 * std::max(1.0, std::abs(series[k - 1].f))) monotone = false;
  }
  return worst;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

InitialKind kind_from(const std::string& s) {
  if (s == "history") return InitialKind::history;
  if (s == "pde") return InitialKind::pde;
  if (s == "orbit") return InitialKind::orbit;
  throw std::invalid_argument("unknown initial kind '" + s + "'");
}

template <class T>
std::optional<T> maybe(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

StageError::StageError(std::string stage, const std::string& message)
    : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::to_E_star: return "to_E_star";
    case Verdict::near_periodic: return "near_periodic";
    case Verdict::extinction: return "extinction";
    case Verdict::prey_explosion: return "prey_explosion";
    case Verdict::undecided: return "undecided";
  }
  return "undecided";
}

ScenarioConfig config_from_json(const json& j, const fs::path& base_dir,
                                const fs::path& output_base) {
  try {
    ScenarioConfig c;
    c.name = j.value("name", c.name);
    c.params = params_from_json(j.at("params"));
    if (j.contains("initial")) {
      const json& in = j.at("initial");
      c.initial.kind = kind_from(in.value("kind", std::string("history")));
      c.initial.profile = in.value("profile", c.initial.kind == InitialKind::pde
                                                  ? std::string("bump")
                                                  : std::string("constant"));
      c.initial.value = maybe<double>(in, "value");
      c.initial.value_rel = maybe<double>(in, "value_rel");
      c.initial.y0 = maybe<double>(in, "y0");
      c.initial.y0_rel = maybe<double>(in, "y0_rel");
      if (in.contains("csv")) c.initial.csv = resolve(base_dir, in.at("csv").get<std::string>());
      c.initial.y_shift_toward_star = in.value("y_shift_toward_star", 0.0);
    }
    c.t_end = j.value("t_end", c.t_end);
    c.steps_per_delay = j.value("steps_per_delay", c.steps_per_delay);
    c.pde_per_delay = j.value("pde_per_delay", c.pde_per_delay);
    c.write_stride = j.value("write_stride", c.write_stride);
    c.crossval_until = j.value("crossval_until", c.crossval_until);
    c.output_dir = resolve(output_base.empty() ? base_dir : output_base,
                           j.value("output_dir", std::string("out/") + c.name));
    if (j.contains("analyses")) {
      const json& a = j.at("analyses");
      c.analyses.lyapunov = a.value("lyapunov", c.analyses.lyapunov);
      c.analyses.spectrum = a.value("spectrum", c.analyses.spectrum);
      c.analyses.orbit = a.value("orbit", c.analyses.orbit);
      c.analyses.pde_crossval = a.value("pde_crossval", c.analyses.pde_crossval);
    }
    if (!(c.t_end > c.params.tau()) || !std::isfinite(c.t_end)) {
      throw std::invalid_argument("t_end must exceed tau");
    }
    if (c.write_stride == 0) throw std::invalid_argument("write_stride must be positive");
    if (c.initial.profile == "csv" && !fs::exists(c.initial.csv)) {
      throw std::invalid_argument("csv not found: " + c.initial.csv.string());
    }
    if (c.analyses.pde_crossval && c.initial.kind != InitialKind::pde) {
      throw std::invalid_argument("pde_crossval needs an initial of kind pde");
    }
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

Verdict decide_verdict(PartitionLabel label, bool has_coexistence,
                       std::optional<double> distance_to_e_star,
                       std::optional<double> final_energy,
                       std::optional<double> tau_autocorrelation) {
  if (label == PartitionLabel::boundary_S0) return Verdict::extinction;
  if (label == PartitionLabel::S1_only || label == PartitionLabel::boundary_S2_cap_S0) {
    return Verdict::prey_explosion;
  }
  if (!has_coexistence) return Verdict::extinction;
  if (distance_to_e_star && final_energy && *distance_to_e_star <= kConvergedDistance &&
      *final_energy <= kConvergedEnergy) {
    return Verdict::to_E_star;
  }
  if (tau_autocorrelation && *tau_autocorrelation > kPeriodicCorrelation &&
      (!distance_to_e_star || *distance_to_e_star > kConvergedDistance)) {
    return Verdict::near_periodic;
  }
  return Verdict::undecided;
}

std::optional<double> tau_autocorrelation(std::span<const double> x, std::size_t m,
                                          std::size_t delays) {
  const std::size_t window = m * delays;
  if (m == 0 || x.size() < window + m + 1) return std::nullopt;
  const std::size_t first = x.size() - window - 1;
  double sa = 0.0, sb = 0.0;
  for (std::size_t k = first; k < x.size(); ++k) {
    sa += x[k];
    sb += x[k - m];
  }
  const double n = static_cast<double>(window + 1);
  const double ma = sa / n, mb = sb / n;
  double cab = 0.0, caa = 0.0, cbb = 0.0;
  for (std::size_t k = first; k < x.size(); ++k) {
    const double da = x[k] - ma, db = x[k - m] - mb;
    cab += da * db;
    caa += da * da;
    cbb += db * db;
  }
  const double scale = std::max(std::abs(ma), 1e-300);
  if (caa <= n * 1e-24 * scale * scale || cbb <= n * 1e-24 * scale * scale) return std::nullopt;
  return cab / std::sqrt(caa * cbb);
}

json to_json(const ScenarioReport& r) {
  json eq = json::array();
  for (const auto& e : r.equilibria) {
    eq.push_back({{"kind", e.kind == EquilibriumKind::extinction ? "E0" : "E_star"},
                  {"X", e.x},
                  {"y", e.y}});
  }
  json j;
  j["name"] = r.name;
  j["params"] = r.params;
  j["thresholds"] = {{"R0", r.thresholds.r0}, {"R_minus", r.thresholds.r_minus},
                     {"a1", r.thresholds.a1}};
  j["equilibria"] = eq;
  j["periodicity_index"] = r.periodicity_index;
  j["partition"] = std::string(to_string(r.partition));
  j["verdict"] = std::string(to_string(r.verdict));
  j["t_end"] = r.t_end;
  j["final_state"] = {{"X", r.final_x}, {"y", r.final_y}};
  j["distances"] = {{"to_E0", r.distance_to_e0},
                    {"to_E_star", optional_number(r.distance_to_e_star)}};
  j["final_energy"] = optional_number(r.final_energy);
  j["tau_autocorrelation"] = optional_number(r.autocorrelation);
  if (r.lyapunov_monotone) {
    j["lyapunov"] = {{"monotone", *r.lyapunov_monotone},
                     {"max_increase", optional_number(r.lyapunov_max_increase)},
                     {"derivative_error", optional_number(r.lyapunov_derivative_error)}};
  }
  if (r.spectrum) j["spectrum"] = io::to_json(*r.spectrum);
  if (r.orbit_requested) {
    j["orbit"] = r.orbit_energy ? json{{"exists", true},
                                       {"energy", *r.orbit_energy},
                                       {"closure_residual", optional_number(r.orbit_closure)}}
                                : json{{"exists", false}};
  }
  if (r.crossval_max_relative) {
    j["pde_crossval"] = {{"max_relative_error", *r.crossval_max_relative},
                         {"profile_sup_error", optional_number(r.profile_sup_error)}};
  }
  j["note"] = "qualitative reproduction: verdicts and index values, no figure data";
  j["files"] = r.files;
  return j;
}

ScenarioReport run(const ScenarioConfig& c) {
  const ModelParams& p = c.params;
  ScenarioReport r(c.name, p);
  const auto star = staged("model", [&] {
    r.thresholds = thresholds(p);
    r.equilibria = equilibria(p);
    r.periodicity_index = periodicity_index(p);
    return coexistence(p);
  });
  r.t_end = c.t_end;

  Initial init = staged("initial", [&] { return build_initial(c); });
  r.partition = staged("partition", [&] { return classify(init.history); });

  staged("output", [&] { fs::create_directories(c.output_dir); });
  auto record = [&](const fs::path& name) { r.files.push_back(name.generic_string()); };

  staged("output", [&] {
    std::vector<std::vector<double>> rows;
    const auto v = init.history.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
      rows.push_back({init.history.spacing() * static_cast<double>(i), v[i]});
    }
    io::write_csv(c.output_dir / "history.csv", "theta,phi", rows);
    record("history.csv");
  });

  const Trajectory traj =
      staged("integrate", [&] { return integrate(p, init.history, c.t_end, c.steps_per_delay); });
  staged("output", [&] {
    io::write_trajectory(c.output_dir / "trajectory.csv", traj, c.write_stride);
    record("trajectory.csv");
  });

  const auto nodes = traj.nodes();
  const auto& last = nodes.back();
  r.t_end = last.t;
  r.final_x = last.x;
  r.final_y = last.y;
  r.distance_to_e0 = std::hypot(last.x, last.y);
  const std::size_t m = c.steps_per_delay;
  const bool in_s2 = !is_boundary(r.partition);

  if (star) {
    r.distance_to_e_star = std::hypot(last.x - star->x, last.y - star->y);
    if (in_s2 && last.x > 0.0 && last.y > 0.0 && nodes.size() > m) {
      staged("lyapunov", [&] {
        // Start once the whole window has positive prey.
        std::size_t zero = 0;
        bool any_zero = false;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
          if (!(nodes[k].x > 0.0)) zero = k, any_zero = true;
        }
        const std::size_t first = any_zero ? std::max(m, zero + 1 + m) : m;
        if (first >= nodes.size()) return;
        if (c.analyses.lyapunov) {
          const auto series = energy_series(p, traj, first);
          bool monotone = true;
          r.lyapunov_max_increase = max_increase(series, monotone);
          r.lyapunov_monotone = monotone;
          r.lyapunov_derivative_error = derivative_check(series, traj.step(), p.tau());
          r.final_energy = series.back().f;
          io::write_energy(c.output_dir / "energy.csv", series, c.write_stride);
          record("energy.csv");
        } else {
          r.final_energy = evaluate_at_node(p, traj, nodes.size() - 1).total;
        }
      });
    }
  }

  {
    std::vector<double> x(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) x[k] = nodes[k].x;
    r.autocorrelation = tau_autocorrelation(x, m, 10);
  }

  if (c.analyses.spectrum && star) {
    staged("spectrum", [&] {
      r.spectrum = roots_in_rectangle(QuasiPolynomial::from_model(p), {-0.01, 5.0, -50.0, 50.0}, 48);
      io::write_json(c.output_dir / "spectrum.json", io::to_json(*r.spectrum));
      record("spectrum.json");
    });
  }

  if (c.analyses.orbit) {
    r.orbit_requested = true;
    staged("orbit", [&] {
      auto orbit = init.orbit ? init.orbit : find_periodic_orbit(p, m);
      if (!orbit) return;
      r.orbit_energy = orbit->energy;
      r.orbit_closure = orbit->closure_residual;
      io::write_orbit(c.output_dir / "orbit.csv", c.output_dir / "orbit.json", *orbit);
      record("orbit.csv");
      record("orbit.json");
    });
  }

  if (c.analyses.pde_crossval && init.profile) {
    staged("pde", [&] {
      const PdeGrid& grid = *init.grid;
      const PdeRun run = simulate_pde(p, grid, initial_state(grid, *init.profile, init.y0), c.t_end);
      // Gap scaled by max(1, X*): pointwise relative error is meaningless
      // where X dips toward zero.
      const double unit = std::max(1.0, star ? star->x : 1.0);
      double worst = 0.0;
      const double until = std::min(c.crossval_until, traj.t_end());
      for (const auto& s : run.series) {
        if (s.t < p.tau() - 1e-12 || s.t > until + 1e-12) continue;
        const State d = traj.sample(std::clamp(s.t, traj.t0(), traj.t_end()));
        worst = std::max(worst, std::abs(s.adult - d.x) / unit);
      }
      r.crossval_max_relative = worst;
      if (star) {
        const PdeEquilibrium e2 = equilibrium_e2(p, grid);
        double sup = 0.0;
        for (std::size_t i = 0; i < grid.nodes; ++i) {
          sup = std::max(sup, std::abs(run.final.x[i] - e2.profile[i]));
        }
        r.profile_sup_error = sup;
      }
      std::vector<PdeSample> thinned;
      for (std::size_t i = 0; i < run.series.size(); i += c.write_stride) {
        thinned.push_back(run.series[i]);
      }
      io::write_pde_series(c.output_dir / "pde_series.csv", thinned);
      io::write_profile(c.output_dir / "pde_profile.csv", grid, run.final.x);
      record("pde_series.csv");
      record("pde_profile.csv");
    });
  }

  r.verdict = decide_verdict(r.partition, star.has_value(), r.distance_to_e_star, r.final_energy,
                             r.autocorrelation);
  r.files.push_back("report.json");
  staged("output", [&] { io::write_json(c.output_dir / "report.json", to_json(r)); });
  return r;
}

ScenarioConfig preset(std::string_view name, const fs::path& output_dir) {
  ScenarioConfig c;
  c.name = std::string(name);
  c.output_dir = output_dir;
  c.steps_per_delay = 256;
  c.analyses = {.lyapunov = true, .spectrum = true, .orbit = false, .pde_crossval = false};
  // Horizons: the slowest linear mode decays at 0.0032 (fig1) and 0.0134
  // (fig2) per unit time, and the fig3 run shadows the orbit until t ~ 1e4
  // before it falls off. Shorter runs end undecided.
  if (name == "fig1") {
    c.params = ModelParams(0.5, 10.0, 0.5, 3.0, 0.7, 2.0);
    c.initial.value_rel = 1.5;
    c.initial.y0_rel = 0.5;
    c.t_end = 3000.0;
    c.write_stride = 8;
  } else if (name == "fig2") {
    c.params = ModelParams(0.5, 20.0, 0.5, 3.0, 0.7, 2.0);
    c.initial.value_rel = 1.5;
    c.initial.y0_rel = 0.5;
    c.t_end = 1000.0;
    c.write_stride = 8;
    c.analyses.orbit = true;
  } else if (name == "fig3") {
    c.params = ModelParams(0.5, 20.0, 0.5, 3.0, 0.7, 2.0);
    c.initial.kind = InitialKind::orbit;
    c.initial.y_shift_toward_star = 0.01;
    c.t_end = 15000.0;
    c.write_stride = 32;
    c.analyses.orbit = true;
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

std::vector<ReproductionCheck> reproduction_checks(std::string_view name,
                                                   const ScenarioReport& r) {
  std::vector<ReproductionCheck> out;
  auto index_check = [&](double quoted) {
    const bool ok = std::abs(r.periodicity_index - quoted) <= 0.005;
    out.push_back({fmt::format("periodicity index {}", quoted), ok,
                   fmt::format("{:.6f}", r.periodicity_index)});
  };
  if (name == "fig1") index_check(0.89);
  if (name == "fig2") index_check(1.34);
  if (name == "fig3") {
    out.push_back({"orbit exists", r.orbit_energy.has_value(),
                   r.orbit_energy ? fmt::format("energy {:.6f}", *r.orbit_energy) : "none"});
  }
  out.push_back({"verdict to_E_star", r.verdict == Verdict::to_E_star,
                 fmt::format("{} at t={}, distance {}", to_string(r.verdict), r.t_end,
                             r.distance_to_e_star ? io::number(*r.distance_to_e_star) : "n/a")});
  return out;
}

fs::path output_root(const fs::path& fallback) {
  if (const char* env = std::getenv("DLV_OUTPUT_ROOT"); env && *env) return fs::path(env);
  return fallback;
}

}  // namespace dlv
