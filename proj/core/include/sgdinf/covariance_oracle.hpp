#pragma once

#include <Eigen/Core>
#include <vector>

#include "sgdinf/batch_scheme.hpp"
#include "sgdinf/covariance.hpp"

namespace sgdinf {

// Reference implementations computed straight from the defining sums over a
// stored iterate history. They share no code with the streaming estimators
// (no five-term expansion, batch positions found by scanning boundaries) and
// exist to check them; they are not for production streams.

// Overlapping estimate: for every i, center the window sum against l_i * xbar
// and accumulate the outer product, then divide by sum(l_i).
CovarianceEstimate oracle_overlap(const std::vector<Eigen::VectorXd>& iterates,
                                  const BatchScheme& scheme);

// Non-overlapping estimate: same centering, summed only over
// S_n = {n} U {a_k - 1 : k > 1, a_k <= n}, with each window sum re-added
// term by term.
CovarianceEstimate oracle_nonoverlap(
    const std::vector<Eigen::VectorXd>& iterates, const BatchScheme& scheme);

// Batch positions (t_i, l_i) for i = 1..n by brute-force scan.
std::vector<std::pair<std::int64_t, std::int64_t>> oracle_batch_layout(
    std::int64_t n, const BatchScheme& scheme);

}  // namespace sgdinf
