#include "dlv/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dlv {

namespace {

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw std::invalid_argument(std::string("model parameter '") + name +
                                "' must be finite and > 0, got " + std::to_string(v));
  }
}

}  // namespace

ModelParams::ModelParams(double mu0, double beta0, double gamma0, double tau,
                         double alpha, double delta)
    : mu0_(mu0), beta0_(beta0), gamma0_(gamma0), tau_(tau), alpha_(alpha), delta_(delta) {
  require_positive(mu0, "mu0");
  require_positive(beta0, "beta0");
  require_positive(gamma0, "gamma0");
  require_positive(tau, "tau");
  require_positive(alpha, "alpha");
  require_positive(delta, "delta");
  if (!(alpha < 1.0)) {
    throw std::invalid_argument("model parameter 'alpha' must lie in (0, 1), got " +
                                std::to_string(alpha));
  }
}

double ModelParams::recruitment() const { return beta0_ * std::exp(-mu0_ * tau_); }

ModelParams ModelParams::with_beta0(double beta0) const {
  return {mu0_, beta0, gamma0_, tau_, alpha_, delta_};
}

void to_json(nlohmann::json& j, const ModelParams& p) {
  j = nlohmann::json{{"mu0", p.mu0()},     {"beta0", p.beta0()}, {"gamma0", p.gamma0()},
                     {"tau", p.tau()},     {"alpha", p.alpha()}, {"delta", p.delta()}};
}

ModelParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("params must be a JSON object");
  auto field = [&](const char* name) {
    if (!j.contains(name)) {
      throw std::invalid_argument(std::string("params missing field '") + name + "'");
    }
    return j.at(name).get<double>();
  };
  return {field("mu0"), field("beta0"), field("gamma0"),
          field("tau"), field("alpha"), field("delta")};
}

}  // namespace dlv
