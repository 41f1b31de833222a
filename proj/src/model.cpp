#include "dlv/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dlv {

namespace {
constexpr double kMassThreshold = 1e-14;
}

Thresholds thresholds(const ModelParams& p) {
  return {p.recruitment() / p.mu0(), 0.0, p.tau()};
}

std::optional<Equilibrium> coexistence(const ModelParams& p) {
  const double surplus = p.recruitment() - p.mu0();
  if (!(surplus > 0.0)) return std::nullopt;
  return Equilibrium{EquilibriumKind::coexistence, p.delta() / (p.alpha() * p.gamma0()),
                     surplus / p.gamma0()};
}

Equilibrium require_coexistence(const ModelParams& p) {
  auto e = coexistence(p);
  if (!e) {
    throw std::domain_error("no coexistence equilibrium: R0 = " +
                            std::to_string(thresholds(p).r0) + " <= 1");
  }
  return *e;
}

std::vector<Equilibrium> equilibria(const ModelParams& p) {
  std::vector<Equilibrium> out{{EquilibriumKind::extinction, 0.0, 0.0}};
  if (auto e = coexistence(p)) out.push_back(*e);
  return out;
}

double periodicity_index(const ModelParams& p) {
  const Equilibrium e = require_coexistence(p);
  return p.tau() * std::sqrt(p.delta() * e.y * p.gamma0()) / (2.0 * std::numbers::pi);
}

std::string_view to_string(PartitionLabel label) {
  switch (label) {
    case PartitionLabel::S3: return "S3";
    case PartitionLabel::S2_only: return "S2_only";
    case PartitionLabel::S1_only: return "S1_only";
    case PartitionLabel::boundary_S2_cap_S0: return "boundary_S2_cap_S0";
    case PartitionLabel::boundary_S0: return "boundary_S0";
  }
  return "unknown";
}

PartitionLabel classify(const HistoryState& history) {
  const auto v = history.values();
  if (std::any_of(v.begin(), v.end(), [](double x) { return x < 0.0; })) {
    throw std::invalid_argument("classify: negative history sample");
  }
  const bool everywhere_positive =
      std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
  // A positive continuous function has positive mass even if the trapezoid
  // sum underflows the threshold.
  const bool has_mass = everywhere_positive || history.integral() > kMassThreshold;
  const bool has_predators = history.y_tau() > 0.0;

  if (!has_mass) return PartitionLabel::boundary_S0;
  if (has_predators) return everywhere_positive ? PartitionLabel::S3 : PartitionLabel::S2_only;
  return everywhere_positive ? PartitionLabel::S1_only : PartitionLabel::boundary_S2_cap_S0;
}

bool is_boundary(PartitionLabel label) {
  return label == PartitionLabel::boundary_S0 || label == PartitionLabel::S1_only ||
         label == PartitionLabel::boundary_S2_cap_S0;
}

}  // namespace dlv
