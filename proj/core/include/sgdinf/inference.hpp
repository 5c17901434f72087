#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstdint>

#include "sgdinf/covariance.hpp"

namespace sgdinf {

// Two-sided interval with nominal coverage `level` = 1 - q, symmetric about
// the point estimate.
struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.0;

  double width() const { return hi - lo; }
  bool contains(double value) const { return lo <= value && value <= hi; }
};

// Interval for coordinate `coord` (0-based) of the optimum:
//   xbar[coord] +- z_{1-q/2} * sqrt(sigma_cc / n).
// Diagonal entries in [-1e-10, 0) are treated as rounding noise and clamped;
// anything more negative is rejected.
ConfidenceInterval ci_coordinate(const Eigen::VectorXd& xbar,
                                 const CovarianceEstimate& est, std::int64_t n,
                                 int coord, double q);

// Interval for the linear functional w'x*:
//   w'xbar +- z_{1-q/2} * sqrt(w' Sigma w / n).
// w need not be normalized; scaling w rescales the interval consistently.
ConfidenceInterval ci_linear(const Eigen::VectorXd& xbar,
                             const CovarianceEstimate& est, std::int64_t n,
                             const Eigen::VectorXd& w, double q);

// Joint confidence ellipsoid
//   {x : n (xbar - x)' Sigma^{-1} (xbar - x) <= chi2_{d, 1-q}},
// held as center xbar, shape Sigma / n, and squared radius. Construction
// factorizes the shape and fails on singular or indefinite estimates.
class EllipsoidRegion {
 public:
  EllipsoidRegion(Eigen::VectorXd center, Eigen::MatrixXd shape,
                  double radius_sq, double level);

  bool contains(const Eigen::VectorXd& x) const;

  // Squared Mahalanobis distance of x from the center under the shape.
  double distance_sq(const Eigen::VectorXd& x) const;

  const Eigen::VectorXd& center() const { return center_; }
  const Eigen::MatrixXd& shape() const { return shape_; }
  double radius_sq() const { return radius_sq_; }
  double level() const { return level_; }
  int dim() const { return static_cast<int>(center_.size()); }

 private:
  Eigen::VectorXd center_;
  Eigen::MatrixXd shape_;
  double radius_sq_;
  double level_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

EllipsoidRegion joint_region(const Eigen::VectorXd& xbar,
                             const CovarianceEstimate& est, std::int64_t n,
                             double q);

}  // namespace sgdinf
