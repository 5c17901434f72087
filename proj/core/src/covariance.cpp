#include "sgdinf/covariance.hpp"

#include <string>

#include "sgdinf/errors.hpp"

namespace sgdinf {

namespace {

SchemeDesc describe(const BatchScheme& scheme) {
  return SchemeDesc{scheme.c(), scheme.beta(), scheme.alpha_hint()};
}

void check_dim(const Eigen::VectorXd& x, int dim, const char* who) {
  if (x.size() != dim) {
    throw ConfigError(std::string(who) + ": vector of dimension " +
                      std::to_string(x.size()) + ", expected " +
                      std::to_string(dim));
  }
}

// (V + q*xbar*xbar' - P*xbar' - xbar*P') / v with an explicit symmetrization
// pass so transposed entries compare bitwise equal.
Eigen::MatrixXd centered_form(const Eigen::MatrixXd& outer_sum,
                              const Eigen::VectorXd& weighted_sum,
                              double length_sum, double length_sq_sum,
                              const Eigen::VectorXd& xbar) {
  Eigen::MatrixXd sigma = outer_sum;
  sigma.noalias() += length_sq_sum * xbar * xbar.transpose();
  sigma.noalias() -= weighted_sum * xbar.transpose();
  sigma.noalias() -= xbar * weighted_sum.transpose();
  sigma /= length_sum;
  sigma = 0.5 * (sigma + sigma.transpose()).eval();
  return sigma;
}

}  // namespace

OverlapCovariance::OverlapCovariance(int dim, BatchScheme scheme)
    : scheme_(std::move(scheme)),
      cursor_(make_cursor(scheme_)),
      batch_sum_(Eigen::VectorXd::Zero(dim)),
      outer_sum_(Eigen::MatrixXd::Zero(dim, dim)),
      weighted_sum_(Eigen::VectorXd::Zero(dim)) {
  if (dim < 1) throw ConfigError("OverlapCovariance: dimension must be >= 1");
}

void OverlapCovariance::update(const Eigen::VectorXd& x_new) {
  check_dim(x_new, dim(), "OverlapCovariance::update");
  if (n_ == 0) {
    batch_sum_ = x_new;  // cursor already sits at step 1
  } else {
    advance(cursor_, scheme_);
    if (cursor_.l == 1) {
      batch_sum_ = x_new;
    } else {
      batch_sum_ += x_new;
    }
  }
  const double l = static_cast<double>(cursor_.l);
  outer_sum_.noalias() += batch_sum_ * batch_sum_.transpose();
  weighted_sum_.noalias() += l * batch_sum_;
  length_sum_ += cursor_.l;
  length_sq_sum_ += cursor_.l * cursor_.l;
  ++n_;
}

CovarianceEstimate OverlapCovariance::finalize(
    const Eigen::VectorXd& xbar) const {
  if (n_ == 0) {
    throw NumericError("OverlapCovariance::finalize: no samples seen");
  }
  check_dim(xbar, dim(), "OverlapCovariance::finalize");
  CovarianceEstimate est;
  est.sigma = centered_form(outer_sum_, weighted_sum_,
                            static_cast<double>(length_sum_),
                            static_cast<double>(length_sq_sum_), xbar);
  est.n = n_;
  est.scheme = describe(scheme_);
  return est;
}

NonOverlapCovariance::NonOverlapCovariance(int dim, BatchScheme scheme)
    : scheme_(std::move(scheme)),
      cursor_(make_cursor(scheme_)),
      outer_done_(Eigen::MatrixXd::Zero(dim, dim)),
      weighted_done_(Eigen::VectorXd::Zero(dim)),
      current_sum_(Eigen::VectorXd::Zero(dim)) {
  if (dim < 1) {
    throw ConfigError("NonOverlapCovariance: dimension must be >= 1");
  }
}

void NonOverlapCovariance::update(const Eigen::VectorXd& x_new) {
  check_dim(x_new, dim(), "NonOverlapCovariance::update");
  if (n_ == 0) {
    current_sum_ = x_new;
    length_cur_ = 1;
  } else {
    advance(cursor_, scheme_);
    if (cursor_.l == 1) {
      // Crossed into batch m+1: the batch that just ended (at a_{m+1} - 1)
      // joins the completed set.
      const double l = static_cast<double>(length_cur_);
      outer_done_.noalias() += current_sum_ * current_sum_.transpose();
      weighted_done_.noalias() += l * current_sum_;
      length_done_ += length_cur_;
      length_sq_done_ += length_cur_ * length_cur_;
      ++folded_;
      current_sum_ = x_new;
      length_cur_ = 1;
    } else {
      current_sum_ += x_new;
      ++length_cur_;
    }
  }
  ++n_;
}

CovarianceEstimate NonOverlapCovariance::finalize(
    const Eigen::VectorXd& xbar) const {
  if (n_ == 0) {
    throw NumericError("NonOverlapCovariance::finalize: no samples seen");
  }
  check_dim(xbar, dim(), "NonOverlapCovariance::finalize");
  // The open batch always contributes: n is a member of S_n.
  const double l = static_cast<double>(length_cur_);
  Eigen::MatrixXd outer = outer_done_;
  outer.noalias() += current_sum_ * current_sum_.transpose();
  Eigen::VectorXd weighted = weighted_done_ + l * current_sum_;
  const std::int64_t v = length_done_ + length_cur_;
  const std::int64_t q = length_sq_done_ + length_cur_ * length_cur_;
  CovarianceEstimate est;
  est.sigma = centered_form(outer, weighted, static_cast<double>(v),
                            static_cast<double>(q), xbar);
  est.n = n_;
  est.scheme = describe(scheme_);
  return est;
}

}  // namespace sgdinf
