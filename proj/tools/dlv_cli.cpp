// dlv: scenario runner for the delayed predator-prey model.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "dlv/io.hpp"
#include "dlv/planar.hpp"
#include "dlv/scenario.hpp"
#include "dlv/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kMismatch = 2;

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return json::parse(in);
}

dlv::ScenarioConfig load(const fs::path& path) {
  const fs::path base = fs::absolute(path).parent_path();
  return dlv::config_from_json(read_json(path), base, dlv::output_root(base));
}

void print_summary(const dlv::ScenarioReport& r, const fs::path& dir) {
  fmt::print("scenario    {}\n", r.name);
  fmt::print("R0          {}\n", dlv::io::number(r.thresholds.r0));
  fmt::print("index       {:.6f}\n", r.periodicity_index);
  fmt::print("partition   {}\n", dlv::to_string(r.partition));
  fmt::print("verdict     {}\n", dlv::to_string(r.verdict));
  if (r.distance_to_e_star) {
    fmt::print("|x - E*|    {} at t = {}\n", dlv::io::number(*r.distance_to_e_star),
               dlv::io::number(r.t_end));
  }
  if (r.lyapunov_monotone) {
    fmt::print("lyapunov    {} (max increase {})\n",
               *r.lyapunov_monotone ? "nonincreasing" : "INCREASES",
               dlv::io::number(*r.lyapunov_max_increase));
  }
  fmt::print("output      {}\n", dir.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delayed Lotka-Volterra lab"};
  app.require_subcommand(1);

  std::string config_path;
  auto* analyze = app.add_subcommand("analyze", "run a scenario config with its analyses");
  analyze->add_option("config", config_path, "scenario JSON")->required()->check(CLI::ExistingFile);

  auto* sim_dde = app.add_subcommand("simulate-dde", "integrate the delayed system only");
  sim_dde->add_option("config", config_path, "scenario JSON")->required()->check(CLI::ExistingFile);

  auto* sim_pde = app.add_subcommand("simulate-pde", "run the age-structured model and compare");
  sim_pde->add_option("config", config_path, "scenario JSON")->required()->check(CLI::ExistingFile);

  std::string out_path;
  std::size_t samples = 512;
  auto* orbit = app.add_subcommand("find-orbit", "tau-periodic orbit of the config parameters");
  orbit->add_option("config", config_path, "scenario JSON")->required()->check(CLI::ExistingFile);
  orbit->add_option("--samples", samples, "samples per period");

  dlv::Rectangle rect{-0.01, 5.0, -50.0, 50.0};
  int grid = 48;
  auto* spectrum = app.add_subcommand("spectrum", "characteristic roots at E*");
  spectrum->add_option("config", config_path, "scenario JSON")->required()->check(CLI::ExistingFile);
  spectrum->add_option("--re-lo", rect.re_lo);
  spectrum->add_option("--re-hi", rect.re_hi);
  spectrum->add_option("--im-lo", rect.im_lo);
  spectrum->add_option("--im-hi", rect.im_hi);
  spectrum->add_option("--grid", grid, "Newton seeds per side");

  std::string figure;
  auto* reproduce = app.add_subcommand("reproduce", "run a built-in preset and check it");
  reproduce->add_option("figure", figure)->required()->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  reproduce->add_option("--out", out_path, "output directory (default <root>/<figure>)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed() || sim_dde->parsed() || sim_pde->parsed()) {
      dlv::ScenarioConfig c = load(config_path);
      if (sim_dde->parsed()) c.analyses = {false, false, false, false};
      if (sim_pde->parsed()) {
        if (c.initial.kind != dlv::InitialKind::pde) {
          throw std::invalid_argument("simulate-pde needs an initial of kind pde");
        }
        c.analyses = {false, false, false, true};
      }
      const auto r = dlv::run(c);
      print_summary(r, c.output_dir);
      if (r.crossval_max_relative) {
        fmt::print("pde vs dde  max relative {}\n", dlv::io::number(*r.crossval_max_relative));
      }
      return kOk;
    }

    if (orbit->parsed()) {
      dlv::ScenarioConfig c = load(config_path);
      const auto o = dlv::find_periodic_orbit(c.params, samples);
      if (!o) {
        fmt::print("no tau-periodic orbit (index {:.6f} <= 1)\n", dlv::periodicity_index(c.params));
        return kOk;
      }
      dlv::io::write_orbit(c.output_dir / "orbit.csv", c.output_dir / "orbit.json", *o);
      fmt::print("energy {}\nplanar_energy {}\nclosure {}\noutput {}\n", dlv::io::number(o->energy),
                 dlv::io::number(o->planar_energy), dlv::io::number(o->closure_residual),
                 c.output_dir.string());
      return kOk;
    }

    if (spectrum->parsed()) {
      dlv::ScenarioConfig c = load(config_path);
      const auto rep =
          dlv::roots_in_rectangle(dlv::QuasiPolynomial::from_model(c.params), rect, grid);
      dlv::io::write_json(c.output_dir / "spectrum.json", dlv::io::to_json(rep));
      fmt::print("{}\n", dlv::io::to_json(rep).dump(2));
      return kOk;
    }

    if (reproduce->parsed()) {
      const fs::path dir = out_path.empty() ? dlv::output_root("out") / figure : fs::path(out_path);
      const auto r = dlv::run(dlv::preset(figure, dir));
      print_summary(r, dir);
      bool ok = true;
      for (const auto& check : dlv::reproduction_checks(figure, r)) {
        fmt::print("{} {}: {}\n", check.passed ? "ok  " : "FAIL", check.what, check.detail);
        ok = ok && check.passed;
      }
      if (!ok) {
        fmt::print(stderr, "reproduction mismatch for {}\n", figure);
        return kMismatch;
      }
      return kOk;
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kError;
  }
  return kError;
}
