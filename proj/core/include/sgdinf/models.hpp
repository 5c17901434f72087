#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>

#include "sgdinf/rng.hpp"
#include "sgdinf/sgd.hpp"

namespace sgdinf {

// A gradient oracle that can also generate its own data and report the
// asymptotic covariance of the averaged iterate, for experiments where the
// truth is known.
class Model : public GradientOracle {
 public:
  // One observation from the model's law. Identical streams give identical
  // observations; the draw order of underlying normals is part of the
  // reproducibility contract.
  virtual Observation draw(RngStream& rng) const = 0;

  // Asymptotic covariance A^{-1} S A^{-1} of sqrt(n) * xbar_n at the optimum.
  virtual Eigen::MatrixXd true_sigma() const = 0;

  virtual Eigen::VectorXd x_star() const = 0;
};

// Scalar location model y = x* + e with squared loss (y - x)^2 / 2.
// Gradient at (x, y) is x - y.
class MeanEstimationModel : public Model {
 public:
  explicit MeanEstimationModel(double x_star, double noise_sd = 1.0);

  using GradientOracle::gradient;
  int dim() const override { return 1; }
  void gradient(const Eigen::VectorXd& x, const Observation& obs,
                Eigen::VectorXd& out) const override;
  Observation draw(RngStream& rng) const override;
  Eigen::MatrixXd true_sigma() const override;
  Eigen::VectorXd x_star() const override;

  double noise_sd() const { return noise_sd_; }

 private:
  double x_star_;
  double noise_sd_;
};

// Linear model b = a'x* + eps with squared loss (a'x - b)^2 / 2,
// a ~ N(0, I_d), eps ~ N(0, noise_sd^2). Gradient is (a'x - b) a.
// A = E[aa'] = I and S = noise_sd^2 I, so the sandwich covariance is
// noise_sd^2 I (the identity under unit noise).
class LinearRegressionModel : public Model {
 public:
  explicit LinearRegressionModel(Eigen::VectorXd x_star, double noise_sd = 1.0);

  // Coefficients drawn componentwise from U(0, 1) on a dedicated stream.
  static LinearRegressionModel random_coefficients(int dim,
                                                   std::uint64_t seed,
                                                   double noise_sd = 1.0);

  using GradientOracle::gradient;
  int dim() const override { return static_cast<int>(x_star_.size()); }
  void gradient(const Eigen::VectorXd& x, const Observation& obs,
                Eigen::VectorXd& out) const override;
  Observation draw(RngStream& rng) const override;
  Eigen::MatrixXd true_sigma() const override;
  Eigen::VectorXd x_star() const override;

  double noise_sd() const { return noise_sd_; }

 private:
  Eigen::VectorXd x_star_;
  double noise_sd_;
};

}  // namespace sgdinf
