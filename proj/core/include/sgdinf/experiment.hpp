#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "sgdinf/covariance.hpp"
#include "sgdinf/models.hpp"

namespace sgdinf {

enum class ModelKind { mean_estimation, linear_regression };
enum class EstimatorKind { overlapping, nonoverlapping };

// Full description of a replicated streaming experiment. Optional fields are
// filled by resolve(): beta from alpha, log-spaced checkpoints, the all-ones
// functional, and the true coefficients (drawn once from a dedicated
// substream of the master seed).
struct ExperimentConfig {
  ModelKind model = ModelKind::linear_regression;
  int dim = 1;
  double noise_sd = 1.0;
  double eta = 0.1;
  double alpha = 0.501;
  double scheme_c = 2.0;
  std::optional<double> beta;
  EstimatorKind estimator = EstimatorKind::overlapping;
  std::int64_t n_max = 1000000;
  std::vector<std::int64_t> checkpoints;
  int reps = 200;
  std::uint64_t master_seed = 42;
  double ci_q = 0.05;
  std::optional<Eigen::VectorXd> functional;
  std::optional<Eigen::VectorXd> true_coeffs;
  int threads = 0;  // 0 = hardware concurrency
};

// 20 log-spaced steps between 100 and n_max (deduplicated, sorted).
std::vector<std::int64_t> default_checkpoints(std::int64_t n_max);

// Validates and returns a copy with every optional field made concrete.
ExperimentConfig resolve(const ExperimentConfig& config);

// Model instance matching the resolved config.
std::unique_ptr<Model> make_model(const ExperimentConfig& resolved);

// Snapshot of one replication at one checkpoint.
struct RunRecord {
  int rep = 0;
  std::int64_t step = 0;
  Eigen::VectorXd xbar;
  Eigen::VectorXd sigma_lower;  // row-major lower triangle of sigma_hat
  double loss = 0.0;            // |w'(sigma_hat - sigma)w|
  double bias = 0.0;            // w'(sigma_hat - sigma)w
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool covered = false;
  bool truth_known = false;
};

// Streams n_max model samples through SGD and the covariance estimator,
// snapshotting at each checkpoint. Memory is O(d^2) regardless of n_max.
std::vector<RunRecord> run_single(const ExperimentConfig& config,
                                  int rep_index);

// Across-replication summary at one checkpoint.
struct CheckpointAggregate {
  std::int64_t step = 0;
  int reps = 0;
  double mean_loss = 0.0;
  double mean_sq_loss = 0.0;  // MSE of w'(sigma_hat - sigma)w
  double coverage = 0.0;
  double mean_ci_length = 0.0;
  double sd_ci_length = 0.0;
  double mean_bias = 0.0;
};

struct AggregateReport {
  ExperimentConfig config;  // resolved
  std::vector<CheckpointAggregate> rows;
};

// Runs all replications (in parallel when threads allow) and reduces them in
// replication order, so the report does not depend on the schedule.
AggregateReport run_replicated(const ExperimentConfig& config);

// Least-squares slope of log(value) against log(n).
double fit_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace sgdinf
