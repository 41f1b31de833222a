#pragma once

#include <json.hpp>

namespace dlv {

/// Constants of the delayed predator-prey system.
///
/// Prey mortality `mu0`, adult birth rate `beta0`, predation rate `gamma0`,
/// maturation delay `tau`, assimilation coefficient `alpha` and predator
/// mortality `delta`. Every field is strictly positive and `alpha < 1`; the
/// constructor throws std::invalid_argument otherwise.
class ModelParams {
 public:
  ModelParams(double mu0, double beta0, double gamma0, double tau, double alpha,
              double delta);

  double mu0() const { return mu0_; }
  double beta0() const { return beta0_; }
  double gamma0() const { return gamma0_; }
  double tau() const { return tau_; }
  double alpha() const { return alpha_; }
  double delta() const { return delta_; }

  /// Per-capita inflow of newly matured prey, beta0 * exp(-mu0 * tau).
  double recruitment() const;

  ModelParams with_beta0(double beta0) const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double mu0_;
  double beta0_;
  double gamma0_;
  double tau_;
  double alpha_;
  double delta_;
};

void to_json(nlohmann::json& j, const ModelParams& p);
ModelParams params_from_json(const nlohmann::json& j);

}  // namespace dlv
