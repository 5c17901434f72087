#include "sgdinf/sgd.hpp"

#include <cmath>
#include <string>

#include "sgdinf/errors.hpp"

namespace sgdinf {

StepSchedule::StepSchedule(double eta, double alpha) : eta_(eta), alpha_(alpha) {
  if (!(eta > 0.0)) {
    throw ConfigError("StepSchedule: eta must be positive, got " +
                      std::to_string(eta));
  }
  if (!(alpha > 0.5 && alpha < 1.0)) {
    throw ConfigError("StepSchedule: alpha must lie in (0.5, 1), got " +
                      std::to_string(alpha));
  }
}

double StepSchedule::step_size(std::int64_t i) const {
  return eta_ * std::pow(static_cast<double>(i), -alpha_);
}

Eigen::VectorXd update_mean(const Eigen::VectorXd& xbar,
                            const Eigen::VectorXd& x_new, std::int64_t n) {
  return (static_cast<double>(n) * xbar + x_new) / static_cast<double>(n + 1);
}

void sgd_step(SgdState& state, const Observation& obs,
              const GradientOracle& oracle, const StepSchedule& schedule) {
  oracle.gradient(state.x, obs, state.grad_);
  if (state.grad_.size() != state.x.size()) {
    throw ConfigError("sgd_step: gradient dimension " +
                      std::to_string(state.grad_.size()) +
                      " does not match iterate dimension " +
                      std::to_string(state.x.size()));
  }
  const double eta_i = schedule.step_size(state.n + 1);
  state.x.noalias() -= eta_i * state.grad_;
  state.xbar =
      (static_cast<double>(state.n) * state.xbar + state.x) /
      static_cast<double>(state.n + 1);
  ++state.n;
}

}  // namespace sgdinf
