#include "dlv/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace dlv::io {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<double> uniform_values(const std::vector<std::pair<double, double>>& rows,
                                   const std::filesystem::path& path) {
  if (rows.size() < 2) throw std::runtime_error(path.string() + ": need at least 2 rows");
  if (std::abs(rows.front().first) > 1e-12) {
    throw std::runtime_error(path.string() + ": first age must be 0");
  }
  const double h = rows[1].first - rows[0].first;
  std::vector<double> values;
  values.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double expected = h * static_cast<double>(i);
    if (std::abs(rows[i].first - expected) > 1e-9 * std::max(1.0, rows.back().first)) {
      throw std::runtime_error(path.string() + ": ages must form a uniform grid");
    }
    values.push_back(rows[i].second);
  }
  return values;
}

}  // namespace

std::string number(double v) { return fmt::format("{}", v); }

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_for_write(path);
  std::string buffer = header + "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) buffer += ',';
      buffer += number(row[i]);
    }
    buffer += '\n';
  }
  out << buffer;
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj,
                      std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("write_trajectory: stride must be positive");
  const auto nodes = traj.nodes();
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < nodes.size(); i += stride) {
    const auto& n = nodes[i];
    rows.push_back({n.t, n.x, n.y, n.dx, n.dy});
  }
  write_csv(path, "t,X,y,dX,dy", rows);
}

void write_energy(const std::filesystem::path& path, std::span<const EnergySample> series,
                  std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("write_energy: stride must be positive");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < series.size(); i += stride) {
    const auto& s = series[i];
    rows.push_back({s.t, s.f, s.analytic_df});
  }
  write_csv(path, "t,F,analytic_dF", rows);
}

void write_orbit(const std::filesystem::path& csv, const std::filesystem::path& sidecar,
                 const PeriodicOrbit& orbit) {
  std::vector<std::vector<double>> rows;
  rows.reserve(orbit.p.size());
  for (std::size_t i = 0; i < orbit.p.size(); ++i) {
    rows.push_back({orbit.t0 + orbit.spacing() * static_cast<double>(i), orbit.p[i], orbit.q[i]});
  }
  write_csv(csv, "t,p,q", rows);
  write_json(sidecar, {{"energy", orbit.energy},
                       {"planar_energy", orbit.planar_energy},
                       {"period", orbit.period},
                       {"closure_residual", orbit.closure_residual}});
}

void write_pde_series(const std::filesystem::path& path, std::span<const PdeSample> series) {
  std::vector<std::vector<double>> rows;
  rows.reserve(series.size());
  for (const auto& s : series) rows.push_back({s.t, s.adult, s.juvenile, s.y});
  write_csv(path, "t,X,Z,y", rows);
}

void write_profile(const std::filesystem::path& path, const PdeGrid& grid,
                   std::span<const double> x) {
  std::vector<std::vector<double>> rows;
  rows.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) rows.push_back({grid.da * static_cast<double>(i), x[i]});
  write_csv(path, "a,x", rows);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
}

std::vector<std::pair<double, double>> read_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected 'a,value'");
    }
    try {
      const double a = std::stod(line.substr(0, comma));
      const double v = std::stod(line.substr(comma + 1));
      rows.emplace_back(a, v);
    } catch (const std::invalid_argument&) {
      if (line_no == 1) continue;  // header
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": not a number");
    }
  }
  return rows;
}

HistoryState history_from_csv(const std::filesystem::path& path, double tau, double y_tau) {
  const auto rows = read_samples(path);
  auto values = uniform_values(rows, path);
  if (std::abs(rows.back().first - tau) > 1e-9 * tau) {
    throw std::runtime_error(path.string() + ": history must span exactly [0, tau]");
  }
  return HistoryState::from_samples(tau, std::move(values), y_tau);
}

AgeProfile profile_from_csv(const std::filesystem::path& path) {
  const auto rows = read_samples(path);
  auto values = uniform_values(rows, path);
  return {rows.back().first, std::move(values)};
}

nlohmann::json to_json(const SpectrumReport& report) {
  nlohmann::json roots = nlohmann::json::array();
  for (const auto& r : report.roots) {
    roots.push_back({{"re", r.value.real()}, {"im", r.value.imag()}, {"residual", r.residual}});
  }
  const auto& rect = report.rectangle;
  return {{"rectangle",
           {{"re_lo", rect.re_lo}, {"re_hi", rect.re_hi}, {"im_lo", rect.im_lo},
            {"im_hi", rect.im_hi}}},
          {"count", report.count},
          {"roots", roots},
          {"max_real_part", report.max_real_part ? nlohmann::json(*report.max_real_part)
                                                 : nlohmann::json(nullptr)}};
}

}  // namespace dlv::io
