#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "sgdinf/covariance.hpp"
#include "sgdinf/covariance_oracle.hpp"
#include "sgdinf/errors.hpp"
#include "sgdinf/rng.hpp"
#include "test_helpers.hpp"

using namespace sgdinf;
using test_helpers::random_stream;
using test_helpers::random_vector;
using test_helpers::rel_frobenius;

namespace {

Eigen::VectorXd running_mean(const std::vector<Eigen::VectorXd>& xs) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(xs.front().size());
  for (const auto& x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

}  // namespace

TEST_CASE("first update fills all five accumulators") {
  const BatchScheme scheme(2.0, 4.0);
  OverlapCovariance cov(2, scheme);
  const Eigen::Vector2d x1(1.0, -2.0);
  cov.update(x1);
  CHECK(cov.n() == 1);
  CHECK(cov.batch_sum() == x1);
  CHECK(cov.outer_sum() == (x1 * x1.transpose()).eval());
  CHECK(cov.weighted_sum() == x1);
  CHECK(cov.length_sum() == 1);
  CHECK(cov.length_sq_sum() == 1);
}

TEST_CASE("second update inside the first batch") {
  const BatchScheme scheme(2.0, 4.0);  // a_2 = 32
  OverlapCovariance cov(1, scheme);
  cov.update(Eigen::VectorXd::Constant(1, 1.0));
  cov.update(Eigen::VectorXd::Constant(1, 2.0));
  CHECK(cov.batch_sum()(0) == 3.0);  // x1 + x2
  CHECK(cov.cursor().l == 2);
  CHECK(cov.length_sum() == 3);     // 1 + 2
  CHECK(cov.length_sq_sum() == 5);  // 1 + 4
}

TEST_CASE("window resets at a batch boundary") {
  const BatchScheme scheme(1.0, 2.0);  // boundaries 1, 4, 9, 16, ...
  OverlapCovariance cov(1, scheme);
  for (int i = 1; i <= 4; ++i) {
    cov.update(Eigen::VectorXd::Constant(1, static_cast<double>(i)));
  }
  CHECK(cov.cursor().m == 2);
  CHECK(cov.cursor().t == 4);
  CHECK(cov.cursor().l == 1);
  CHECK(cov.batch_sum()(0) == 4.0);  // restarted at x_4
}

TEST_CASE("finalize with a single sample is the zero matrix") {
  const BatchScheme scheme(2.0, 4.0);
  OverlapCovariance cov(3, scheme);
  RngStream rng(5);
  const Eigen::VectorXd x = random_vector(rng, 3);
  cov.update(x);
  const CovarianceEstimate est = cov.finalize(x);
  CHECK(est.n == 1);
  CHECK(est.sigma.norm() == 0.0);

  NonOverlapCovariance no(3, scheme);
  no.update(x);
  CHECK(no.finalize(x).sigma.norm() == 0.0);
}

TEST_CASE("finalize before any update is an error") {
  const BatchScheme scheme(2.0, 4.0);
  CHECK_THROWS_AS(OverlapCovariance(2, scheme).finalize(Eigen::Vector2d::Zero()),
                  NumericError);
  CHECK_THROWS_AS(
      NonOverlapCovariance(2, scheme).finalize(Eigen::Vector2d::Zero()),
      NumericError);
}

TEST_CASE("dimension mismatch is rejected") {
  const BatchScheme scheme(2.0, 4.0);
  OverlapCovariance cov(2, scheme);
  CHECK_THROWS_AS(cov.update(Eigen::Vector3d::Zero()), ConfigError);
  cov.update(Eigen::Vector2d::Ones());
  CHECK_THROWS_AS(cov.finalize(Eigen::Vector3d::Zero()), ConfigError);
}

TEST_CASE("constant streams have zero covariance") {
  const BatchScheme scheme(2.0, 4.0);
  const Eigen::Vector2d c(0.1, -3.7);
  OverlapCovariance cov(2, scheme);
  NonOverlapCovariance no(2, scheme);
  for (int i = 0; i < 200; ++i) {
    cov.update(c);
    no.update(c);
  }
  // Exactly zero in real arithmetic; the centered form leaves only
  // cancellation noise well under the 1e-10 structural gate.
  CHECK(cov.finalize(c).sigma.norm() <= 1e-10);
  CHECK(no.finalize(c).sigma.norm() <= 1e-10);
}

TEST_CASE("two iterates in one batch expand symbolically") {
  // With both points inside the first batch, the overlapping estimate is
  // (x1 - x2)^2 / 12 and the non-overlapping one collapses to zero.
  const BatchScheme scheme(2.0, 4.0);
  const double x1 = 0.9, x2 = -1.7;
  std::vector<Eigen::VectorXd> xs{Eigen::VectorXd::Constant(1, x1),
                                  Eigen::VectorXd::Constant(1, x2)};
  const double expected = (x1 - x2) * (x1 - x2) / 12.0;
  CHECK(oracle_overlap(xs, scheme).sigma(0, 0) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(oracle_nonoverlap(xs, scheme).sigma(0, 0) ==
        doctest::Approx(0.0).epsilon(1e-12));

  OverlapCovariance cov(1, scheme);
  cov.update(xs[0]);
  cov.update(xs[1]);
  CHECK(cov.finalize(running_mean(xs)).sigma(0, 0) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("non-overlapping estimator folds batches exactly at boundaries") {
  const BatchScheme scheme(1.0, 2.0);  // boundaries 1, 4, 9, 16, ...
  NonOverlapCovariance cov(1, scheme);
  RngStream rng(17);
  for (int i = 1; i <= 3; ++i) {
    cov.update(Eigen::VectorXd::Constant(1, rng.normal()));
    CHECK(cov.completed_count() == 0);
    CHECK(cov.completed_outer_sum().norm() == 0.0);
  }
  cov.update(Eigen::VectorXd::Constant(1, rng.normal()));  // i = 4 = a_2
  CHECK(cov.completed_count() == 1);
  CHECK(cov.current_length() == 1);

  for (int i = 5; i <= 40; ++i) {
    cov.update(Eigen::VectorXd::Constant(1, rng.normal()));
  }
  // Completed set is {a_k - 1 : k > 1, a_k <= 40} = {3, 8, 15, 24, 35}.
  CHECK(cov.completed_count() == 5);
  CHECK(cov.current_length() == 40 - 36 + 1);
}

TEST_CASE("recursive estimates equal the definitional oracles") {
  RngStream rng(23);
  const BatchScheme scheme = BatchScheme::for_alpha(2.0, 0.501);
  for (int trial = 0; trial < 10; ++trial) {
    const auto xs = random_stream(rng, 3, 500);
    OverlapCovariance cov(3, scheme);
    NonOverlapCovariance no(3, scheme);
    for (const auto& x : xs) {
      cov.update(x);
      no.update(x);
    }
    const Eigen::VectorXd xbar = running_mean(xs);
    CHECK(rel_frobenius(cov.finalize(xbar).sigma,
                        oracle_overlap(xs, scheme).sigma) <= 1e-8);
    CHECK(rel_frobenius(no.finalize(xbar).sigma,
                        oracle_nonoverlap(xs, scheme).sigma) <= 1e-8);
  }
}

TEST_CASE("length sums match brute-force integer sums") {
  const BatchScheme scheme = BatchScheme::for_alpha(1.0, 0.7);
  const std::int64_t total = 2000;
  const auto layout = oracle_batch_layout(total, scheme);
  std::int64_t v = 0, q = 0;
  OverlapCovariance cov(1, scheme);
  RngStream rng(29);
  for (std::int64_t i = 1; i <= total; ++i) {
    const auto l = layout[static_cast<std::size_t>(i - 1)].second;
    v += l;
    q += l * l;
    cov.update(Eigen::VectorXd::Constant(1, rng.normal()));
  }
  CHECK(cov.length_sum() == v);
  CHECK(cov.length_sq_sum() == q);
}

TEST_CASE("estimates are exactly symmetric and PSD up to noise") {
  RngStream rng(31);
  const BatchScheme scheme = BatchScheme::for_alpha(2.0, 0.501);
  const auto xs = random_stream(rng, 4, 800);
  OverlapCovariance cov(4, scheme);
  NonOverlapCovariance no(4, scheme);
  for (const auto& x : xs) {
    cov.update(x);
    no.update(x);
  }
  const Eigen::VectorXd xbar = running_mean(xs);
  for (const auto& est : {cov.finalize(xbar), no.finalize(xbar)}) {
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < r; ++c) {
        CHECK(est.sigma(r, c) == est.sigma(c, r));  // bitwise
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(est.sigma);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    CHECK(lo >= -1e-10 * std::max(1.0, hi));
  }
}

TEST_CASE("affine scaling maps the estimate to c^2 sigma") {
  RngStream rng(37);
  const BatchScheme scheme(2.0, 4.0);
  const auto xs = random_stream(rng, 2, 300);
  const double c = -2.5;
  const Eigen::Vector2d b(0.8, -1.4);
  std::vector<Eigen::VectorXd> ys;
  for (const auto& x : xs) ys.push_back(c * x + b);

  const Eigen::MatrixXd base = oracle_overlap(xs, scheme).sigma;
  const Eigen::MatrixXd mapped = oracle_overlap(ys, scheme).sigma;
  CHECK(rel_frobenius(mapped, (c * c) * base) <= 1e-10);

  const Eigen::MatrixXd base_no = oracle_nonoverlap(xs, scheme).sigma;
  const Eigen::MatrixXd mapped_no = oracle_nonoverlap(ys, scheme).sigma;
  CHECK(rel_frobenius(mapped_no, (c * c) * base_no) <= 1e-10);
}

TEST_CASE("invertible linear maps conjugate the estimate") {
  RngStream rng(41);
  const BatchScheme scheme(2.0, 4.0);
  const auto xs = random_stream(rng, 3, 400);
  Eigen::Matrix3d B;
  B << 1.2, 0.3, -0.5, 0.0, -0.9, 0.4, 0.7, 0.1, 1.1;
  std::vector<Eigen::VectorXd> ys;
  for (const auto& x : xs) ys.push_back(B * x);

  OverlapCovariance cov_x(3, scheme), cov_y(3, scheme);
  for (const auto& x : xs) cov_x.update(x);
  for (const auto& y : ys) cov_y.update(y);
  const Eigen::MatrixXd sx = cov_x.finalize(running_mean(xs)).sigma;
  const Eigen::MatrixXd sy = cov_y.finalize(running_mean(ys)).sigma;
  CHECK(rel_frobenius(sy, B * sx * B.transpose()) <= 1e-8);
}

TEST_CASE("state evolution never peeks at the eventual stream length") {
  RngStream rng(43);
  const BatchScheme scheme = BatchScheme::for_alpha(2.0, 0.501);
  const auto xs = random_stream(rng, 2, 500);

  OverlapCovariance full(2, scheme);
  OverlapCovariance prefix(2, scheme);
  for (int i = 0; i < 100; ++i) {
    full.update(xs[static_cast<std::size_t>(i)]);
    prefix.update(xs[static_cast<std::size_t>(i)]);
  }
  const OverlapCovariance snapshot = full;  // value copy at n = 100
  for (int i = 100; i < 500; ++i) full.update(xs[static_cast<std::size_t>(i)]);

  CHECK(snapshot.n() == prefix.n());
  CHECK(snapshot.length_sum() == prefix.length_sum());
  CHECK(snapshot.length_sq_sum() == prefix.length_sq_sum());
  CHECK(snapshot.batch_sum() == prefix.batch_sum());
  CHECK(snapshot.outer_sum() == prefix.outer_sum());
  CHECK(snapshot.weighted_sum() == prefix.weighted_sum());
}

TEST_CASE("oracles reject empty streams") {
  const BatchScheme scheme(2.0, 4.0);
  CHECK_THROWS_AS(oracle_overlap({}, scheme), NumericError);
  CHECK_THROWS_AS(oracle_nonoverlap({}, scheme), NumericError);
}
