#pragma once

#include <Eigen/Core>

namespace sgdinf {

// One sample from a data stream.
//
// Linear regression rows carry a covariate vector and a response;
// scalar models (mean estimation) use `response` only and leave
// `covariates` empty.
struct Observation {
  Eigen::VectorXd covariates;
  double response = 0.0;
};

}  // namespace sgdinf
