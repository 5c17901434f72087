#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>

#include "sgdinf/batch_scheme.hpp"

namespace sgdinf {

// Batch layout a covariance estimate was computed under, kept for reporting.
struct SchemeDesc {
  double c = 0.0;
  double beta = 0.0;
  std::optional<double> alpha;
};

// Symmetric d x d estimate of the asymptotic covariance of sqrt(n) * xbar_n.
struct CovarianceEstimate {
  Eigen::MatrixXd sigma;
  std::int64_t n = 0;
  SchemeDesc scheme;

  int dim() const { return static_cast<int>(sigma.rows()); }
};

// Streaming estimator over all n overlapping windows B_i = {x_{t_i},..,x_i}.
//
// Maintains the five accumulators that make the estimate recursive:
//   W = sum of iterates in the current window,
//   V = sum_i W_i W_i',   P = sum_i l_i W_i,
//   v = sum_i l_i,        q = sum_i l_i^2.
// Each update costs O(d^2) time and memory, independent of how many samples
// will eventually arrive.
class OverlapCovariance {
 public:
  OverlapCovariance(int dim, BatchScheme scheme);

  // Folds in iterate x_{n+1}.
  void update(const Eigen::VectorXd& x_new);

  // (V + q*xbar*xbar' - P*xbar' - xbar*P') / v, symmetric by construction.
  // The caller supplies the running average of the same n iterates.
  CovarianceEstimate finalize(const Eigen::VectorXd& xbar) const;

  std::int64_t n() const { return n_; }
  int dim() const { return static_cast<int>(batch_sum_.size()); }
  const BatchScheme& scheme() const { return scheme_; }
  const BatchCursor& cursor() const { return cursor_; }
  const Eigen::VectorXd& batch_sum() const { return batch_sum_; }
  const Eigen::MatrixXd& outer_sum() const { return outer_sum_; }
  const Eigen::VectorXd& weighted_sum() const { return weighted_sum_; }
  std::int64_t length_sum() const { return length_sum_; }
  std::int64_t length_sq_sum() const { return length_sq_sum_; }

 private:
  BatchScheme scheme_;
  BatchCursor cursor_;
  std::int64_t n_ = 0;
  Eigen::VectorXd batch_sum_;     // W_n
  Eigen::MatrixXd outer_sum_;     // V_n
  Eigen::VectorXd weighted_sum_;  // P_n
  std::int64_t length_sum_ = 0;   // v_n
  std::int64_t length_sq_sum_ = 0;  // q_n
};

// Streaming estimator over the non-overlapping batch ends
//   S_n = {n} U {a_k - 1 : k > 1, a_k <= n}.
//
// Completed batches are folded into the accumulators exactly when the cursor
// crosses a boundary; the open batch contributes through (W_cur, l_cur) at
// finalize time only.
class NonOverlapCovariance {
 public:
  NonOverlapCovariance(int dim, BatchScheme scheme);

  void update(const Eigen::VectorXd& x_new);

  CovarianceEstimate finalize(const Eigen::VectorXd& xbar) const;

  std::int64_t n() const { return n_; }
  int dim() const { return static_cast<int>(current_sum_.size()); }
  const BatchScheme& scheme() const { return scheme_; }
  const BatchCursor& cursor() const { return cursor_; }
  const Eigen::MatrixXd& completed_outer_sum() const { return outer_done_; }
  const Eigen::VectorXd& current_sum() const { return current_sum_; }
  std::int64_t current_length() const { return length_cur_; }
  std::int64_t completed_count() const { return folded_; }

 private:
  BatchScheme scheme_;
  BatchCursor cursor_;
  std::int64_t n_ = 0;
  Eigen::MatrixXd outer_done_;
  Eigen::VectorXd weighted_done_;
  std::int64_t length_done_ = 0;
  std::int64_t length_sq_done_ = 0;
  std::int64_t folded_ = 0;  // completed batches folded so far
  Eigen::VectorXd current_sum_;  // W over the open batch
  std::int64_t length_cur_ = 0;
};

}  // namespace sgdinf
