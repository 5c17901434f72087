#pragma once

#include <Eigen/Core>
#include <vector>

#include "sgdinf/rng.hpp"

namespace test_helpers {

inline Eigen::VectorXd random_vector(sgdinf::RngStream& rng, int dim) {
  Eigen::VectorXd v(dim);
  for (int k = 0; k < dim; ++k) v(k) = rng.normal();
  return v;
}

inline std::vector<Eigen::VectorXd> random_stream(sgdinf::RngStream& rng,
                                                  int dim, int n) {
  std::vector<Eigen::VectorXd> xs;
  xs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs.push_back(random_vector(rng, dim));
  return xs;
}

inline double rel_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double denom = b.norm();
  if (denom == 0.0) return a.norm();
  return (a - b).norm() / denom;
}

}  // namespace test_helpers
