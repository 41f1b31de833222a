#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dlv/model.hpp"
#include "dlv/params.hpp"
#include "dlv/spectral.hpp"

namespace dlv {

enum class InitialKind { history, pde, orbit };

/// Where the initial condition comes from.
///
/// history: phi on [0, tau] (profile "constant" or "csv"), with y_tau.
/// pde: age profile x0 (profile "bump" or "csv") and y0, turned into a DDE
///   history by the prelude.
/// orbit: samples of the tau-periodic orbit, y_tau moved a fraction
///   `y_shift_toward_star` of the way to y*.
///
/// Levels given as *_rel are multiples of X* (prey) or y* (predator).
struct InitialSpec {
  InitialKind kind = InitialKind::history;
  std::string profile = "constant";
  std::optional<double> value;
  std::optional<double> value_rel;
  std::optional<double> y0;
  std::optional<double> y0_rel;
  std::filesystem::path csv;
  double y_shift_toward_star = 0.0;
};

struct Analyses {
  bool lyapunov = true;
  bool spectrum = false;
  bool orbit = false;
  bool pde_crossval = false;
};

struct ScenarioConfig {
  std::string name = "scenario";
  ModelParams params{0.5, 10.0, 0.5, 3.0, 0.7, 2.0};
  InitialSpec initial;
  double t_end = 500.0;
  std::size_t steps_per_delay = 256;
  std::size_t pde_per_delay = 512;
  std::size_t write_stride = 1;  ///< keep every n-th node in the CSV series
  double crossval_until = 100.0; ///< PDE/DDE comparison window is [tau, this]
  std::filesystem::path output_dir;
  Analyses analyses;
};

/// Parses the JSON document. A relative csv path resolves against
/// `base_dir`, a relative output_dir against `output_base` (defaults to
/// base_dir). Throws std::invalid_argument on bad fields.
ScenarioConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir,
                                const std::filesystem::path& output_base = {});

enum class Verdict { to_E_star, near_periodic, extinction, prey_explosion, undecided };

std::string_view to_string(Verdict v);

/// Verdict thresholds.
inline constexpr double kConvergedDistance = 1e-3;
inline constexpr double kConvergedEnergy = 1e-6;
inline constexpr double kPeriodicCorrelation = 0.999;

/// Deterministic verdict from the computed quantities. Boundary labels and
/// R0 <= 1 decide before anything else.
Verdict decide_verdict(PartitionLabel label, bool has_coexistence,
                       std::optional<double> distance_to_e_star,
                       std::optional<double> final_energy,
                       std::optional<double> tau_autocorrelation);

/// Pearson correlation of X(t) and X(t - tau) over the last `delays` delay
/// windows of the node series. Nothing when X is constant there.
std::optional<double> tau_autocorrelation(std::span<const double> x, std::size_t steps_per_delay,
                                          std::size_t delays);

struct ScenarioReport {
  ScenarioReport(std::string name, ModelParams params)
      : name(std::move(name)), params(params) {}

  std::string name;
  ModelParams params;
  Thresholds thresholds{};
  std::vector<Equilibrium> equilibria;
  double periodicity_index = 0.0;
  PartitionLabel partition = PartitionLabel::boundary_S0;
  Verdict verdict = Verdict::undecided;
  double t_end = 0.0;
  double final_x = 0.0;
  double final_y = 0.0;
  double distance_to_e0 = 0.0;
  std::optional<double> distance_to_e_star;
  std::optional<double> final_energy;
  std::optional<double> autocorrelation;
  std::optional<bool> lyapunov_monotone;
  std::optional<double> lyapunov_max_increase;
  std::optional<double> lyapunov_derivative_error;
  std::optional<SpectrumReport> spectrum;
  bool orbit_requested = false;
  std::optional<double> orbit_energy;
  std::optional<double> orbit_closure;
  std::optional<double> crossval_max_relative;  ///< max |X_pde - X_dde| / max(1, X*)
  std::optional<double> profile_sup_error;
  std::vector<std::string> files;
};

nlohmann::json to_json(const ScenarioReport& r);

/// Error from a pipeline stage; what() starts with the stage name.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Runs the pipeline and writes artifacts plus report.json into output_dir.
/// Module errors come back as StageError.
ScenarioReport run(const ScenarioConfig& config);

/// Built-in scenarios "fig1", "fig2", "fig3". Throws std::invalid_argument.
ScenarioConfig preset(std::string_view name, const std::filesystem::path& output_dir);

struct ReproductionCheck {
  std::string what;
  bool passed;
  std::string detail;
};

/// Checks a preset's report against the quoted values.
std::vector<ReproductionCheck> reproduction_checks(std::string_view name,
                                                   const ScenarioReport& report);

/// Output root: $DLV_OUTPUT_ROOT when set, else `fallback`.
std::filesystem::path output_root(const std::filesystem::path& fallback);

}  // namespace dlv
