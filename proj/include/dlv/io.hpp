#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dlv/dde.hpp"
#include "dlv/lyapunov.hpp"
#include "dlv/pde.hpp"
#include "dlv/planar.hpp"
#include "dlv/spectral.hpp"

namespace dlv::io {

/// Shortest decimal text that round-trips the double. Locale independent.
std::string number(double v);

/// Writes `header` then one row per entry, ',' separated, '\n' terminated.
void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

/// `stride` keeps every stride-th node (the first one always).
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj,
                      std::size_t stride = 1);
void write_energy(const std::filesystem::path& path, std::span<const EnergySample> series,
                  std::size_t stride = 1);
void write_orbit(const std::filesystem::path& csv, const std::filesystem::path& sidecar,
                 const PeriodicOrbit& orbit);
void write_pde_series(const std::filesystem::path& path, std::span<const PdeSample> series);
void write_profile(const std::filesystem::path& path, const PdeGrid& grid,
                   std::span<const double> x);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Reads `a,value` rows (header optional). Throws std::runtime_error.
std::vector<std::pair<double, double>> read_samples(const std::filesystem::path& path);

/// Samples on a uniform grid starting at 0; the spacing is checked to 1e-9.
HistoryState history_from_csv(const std::filesystem::path& path, double tau, double y_tau);
AgeProfile profile_from_csv(const std::filesystem::path& path);

nlohmann::json to_json(const SpectrumReport& report);

}  // namespace dlv::io
