#include "sgdinf/inference.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "sgdinf/errors.hpp"
#include "sgdinf/quantiles.hpp"

namespace sgdinf {

namespace {

constexpr double kVarianceNoiseGate = 1e-10;

// Quadratic forms that are tiny and negative are rounding noise from the
// centered accumulators; anything below the gate is a real defect.
double clamp_variance(double value, const char* who) {
  if (value >= 0.0) return value;
  if (value >= -kVarianceNoiseGate) return 0.0;
  throw NumericError(std::string(who) +
                     ": negative variance term " + std::to_string(value));
}

void check_args(const Eigen::VectorXd& xbar, const CovarianceEstimate& est,
                std::int64_t n, double q, const char* who) {
  if (n < 1) {
    throw ConfigError(std::string(who) + ": n must be >= 1");
  }
  if (!(q > 0.0 && q < 1.0)) {
    throw ConfigError(std::string(who) + ": q must lie in (0, 1), got " +
                      std::to_string(q));
  }
  if (xbar.size() != est.sigma.rows() || est.sigma.rows() != est.sigma.cols()) {
    throw ConfigError(std::string(who) + ": dimension mismatch");
  }
}

}  // namespace

ConfidenceInterval ci_coordinate(const Eigen::VectorXd& xbar,
                                 const CovarianceEstimate& est, std::int64_t n,
                                 int coord, double q) {
  check_args(xbar, est, n, q, "ci_coordinate");
  if (coord < 0 || coord >= xbar.size()) {
    throw ConfigError("ci_coordinate: coordinate " + std::to_string(coord) +
                      " out of range for dimension " +
                      std::to_string(xbar.size()));
  }
  const double var =
      clamp_variance(est.sigma(coord, coord), "ci_coordinate");
  const double z = z_quantile(1.0 - 0.5 * q);
  const double half = z * std::sqrt(var / static_cast<double>(n));
  const double center = xbar(coord);
  return ConfidenceInterval{center - half, center + half, 1.0 - q};
}

ConfidenceInterval ci_linear(const Eigen::VectorXd& xbar,
                             const CovarianceEstimate& est, std::int64_t n,
                             const Eigen::VectorXd& w, double q) {
  check_args(xbar, est, n, q, "ci_linear");
  if (w.size() != xbar.size()) {
    throw ConfigError("ci_linear: functional dimension " +
                      std::to_string(w.size()) + " does not match " +
                      std::to_string(xbar.size()));
  }
  if (w.isZero(0.0)) {
    throw ConfigError("ci_linear: functional w must be nonzero");
  }
  const double var = clamp_variance(w.dot(est.sigma * w), "ci_linear");
  const double z = z_quantile(1.0 - 0.5 * q);
  const double half = z * std::sqrt(var / static_cast<double>(n));
  const double center = w.dot(xbar);
  return ConfidenceInterval{center - half, center + half, 1.0 - q};
}

EllipsoidRegion::EllipsoidRegion(Eigen::VectorXd center, Eigen::MatrixXd shape,
                                 double radius_sq, double level)
    : center_(std::move(center)),
      shape_(std::move(shape)),
      radius_sq_(radius_sq),
      level_(level) {
  if (shape_.rows() != shape_.cols() || shape_.rows() != center_.size()) {
    throw ConfigError("EllipsoidRegion: shape/center dimension mismatch");
  }
  if (!(radius_sq_ > 0.0)) {
    throw ConfigError("EllipsoidRegion: radius_sq must be positive");
  }
  llt_.compute(shape_);
  if (llt_.info() != Eigen::Success) {
    throw NumericError(
        "EllipsoidRegion: shape matrix is singular or indefinite");
  }
}

double EllipsoidRegion::distance_sq(const Eigen::VectorXd& x) const {
  if (x.size() != center_.size()) {
    throw ConfigError("EllipsoidRegion: point dimension mismatch");
  }
  const Eigen::VectorXd diff = center_ - x;
  return diff.dot(llt_.solve(diff));
}

bool EllipsoidRegion::contains(const Eigen::VectorXd& x) const {
  return distance_sq(x) <= radius_sq_;
}

EllipsoidRegion joint_region(const Eigen::VectorXd& xbar,
                             const CovarianceEstimate& est, std::int64_t n,
                             double q) {
  check_args(xbar, est, n, q, "joint_region");
  const int d = static_cast<int>(xbar.size());
  const double radius_sq = chi2_quantile(d, 1.0 - q);
  return EllipsoidRegion(xbar, est.sigma / static_cast<double>(n), radius_sq,
                         1.0 - q);
}

}  // namespace sgdinf
