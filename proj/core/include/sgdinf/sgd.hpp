#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "sgdinf/observation.hpp"

namespace sgdinf {

// Decaying step size eta_i = eta * i^(-alpha) with alpha in (0.5, 1).
// The open interval is required for the averaged iterate to be
// asymptotically normal, so the boundary values are rejected.
class StepSchedule {
 public:
  StepSchedule(double eta, double alpha);

  // Step size for 1-based step index i.
  double step_size(std::int64_t i) const;

  double eta() const { return eta_; }
  double alpha() const { return alpha_; }

 private:
  double eta_;
  double alpha_;
};

// Per-sample gradient of the loss, evaluated at the current iterate.
class GradientOracle {
 public:
  virtual ~GradientOracle() = default;

  virtual int dim() const = 0;

  // Writes grad f(x, obs) into `out` (resized to dim()).
  // Must be deterministic given (x, obs).
  virtual void gradient(const Eigen::VectorXd& x, const Observation& obs,
                        Eigen::VectorXd& out) const = 0;

  Eigen::VectorXd gradient(const Eigen::VectorXd& x,
                           const Observation& obs) const {
    Eigen::VectorXd g;
    gradient(x, obs, g);
    return g;
  }
};

// Current iterate, running average of iterates x_1..x_n, and step count.
// x_0 is supplied at construction (zero by default); the average excludes it.
struct SgdState {
  std::int64_t n = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd xbar;

  explicit SgdState(int dim)
      : x(Eigen::VectorXd::Zero(dim)),
        xbar(Eigen::VectorXd::Zero(dim)),
        grad_(dim) {}
  explicit SgdState(Eigen::VectorXd x0)
      : x(std::move(x0)), xbar(Eigen::VectorXd::Zero(x.size())), grad_(x.size()) {}

  int dim() const { return static_cast<int>(x.size()); }

 private:
  friend void sgd_step(SgdState&, const Observation&, const GradientOracle&,
                       const StepSchedule&);
  Eigen::VectorXd grad_;  // scratch, avoids per-step allocation
};

// Running mean: (n * xbar + x_new) / (n + 1), where n values were already
// averaged.
Eigen::VectorXd update_mean(const Eigen::VectorXd& xbar,
                            const Eigen::VectorXd& x_new, std::int64_t n);

// One SGD step: x <- x - eta_{n+1} * grad f(x, obs), then fold the new
// iterate into the running average and bump the counter.
void sgd_step(SgdState& state, const Observation& obs,
              const GradientOracle& oracle, const StepSchedule& schedule);

}  // namespace sgdinf
