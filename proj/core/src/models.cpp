#include "sgdinf/models.hpp"

#include <string>
#include <utility>

#include "sgdinf/errors.hpp"

namespace sgdinf {

MeanEstimationModel::MeanEstimationModel(double x_star, double noise_sd)
    : x_star_(x_star), noise_sd_(noise_sd) {
  if (!(noise_sd >= 0.0)) {
    throw ConfigError("MeanEstimationModel: noise_sd must be >= 0");
  }
}

void MeanEstimationModel::gradient(const Eigen::VectorXd& x,
                                   const Observation& obs,
                                   Eigen::VectorXd& out) const {
  if (x.size() != 1) {
    throw ConfigError("MeanEstimationModel: iterate must be 1-dimensional");
  }
  out.resize(1);
  out(0) = x(0) - obs.response;
}

Observation MeanEstimationModel::draw(RngStream& rng) const {
  Observation obs;
  obs.response = x_star_ + noise_sd_ * rng.normal();
  return obs;
}

Eigen::MatrixXd MeanEstimationModel::true_sigma() const {
  return Eigen::MatrixXd::Constant(1, 1, noise_sd_ * noise_sd_);
}

Eigen::VectorXd MeanEstimationModel::x_star() const {
  return Eigen::VectorXd::Constant(1, x_star_);
}

LinearRegressionModel::LinearRegressionModel(Eigen::VectorXd x_star,
                                             double noise_sd)
    : x_star_(std::move(x_star)), noise_sd_(noise_sd) {
  if (x_star_.size() < 1) {
    throw ConfigError("LinearRegressionModel: dimension must be >= 1");
  }
  if (!(noise_sd >= 0.0)) {
    throw ConfigError("LinearRegressionModel: noise_sd must be >= 0");
  }
}

LinearRegressionModel LinearRegressionModel::random_coefficients(
    int dim, std::uint64_t seed, double noise_sd) {
  if (dim < 1) {
    throw ConfigError("LinearRegressionModel: dimension must be >= 1");
  }
  RngStream rng(seed);
  Eigen::VectorXd coeffs(dim);
  for (int k = 0; k < dim; ++k) coeffs(k) = rng.uniform01();
  return LinearRegressionModel(std::move(coeffs), noise_sd);
}

void LinearRegressionModel::gradient(const Eigen::VectorXd& x,
                                     const Observation& obs,
                                     Eigen::VectorXd& out) const {
  if (x.size() != x_star_.size() || obs.covariates.size() != x_star_.size()) {
    throw ConfigError(
        "LinearRegressionModel: dimension mismatch (iterate " +
        std::to_string(x.size()) + ", covariates " +
        std::to_string(obs.covariates.size()) + ", model " +
        std::to_string(x_star_.size()) + ")");
  }
  const double residual = obs.covariates.dot(x) - obs.response;
  out = residual * obs.covariates;
}

Observation LinearRegressionModel::draw(RngStream& rng) const {
  const auto d = x_star_.size();
  Observation obs;
  obs.covariates.resize(d);
  for (Eigen::Index k = 0; k < d; ++k) obs.covariates(k) = rng.normal();
  obs.response = obs.covariates.dot(x_star_) + noise_sd_ * rng.normal();
  return obs;
}

Eigen::MatrixXd LinearRegressionModel::true_sigma() const {
  const auto d = x_star_.size();
  return noise_sd_ * noise_sd_ * Eigen::MatrixXd::Identity(d, d);
}

Eigen::VectorXd LinearRegressionModel::x_star() const { return x_star_; }

}  // namespace sgdinf
