#include "sgdinf/covariance_oracle.hpp"

#include "sgdinf/errors.hpp"

namespace sgdinf {

std::vector<std::pair<std::int64_t, std::int64_t>> oracle_batch_layout(
    std::int64_t n, const BatchScheme& scheme) {
  std::vector<std::pair<std::int64_t, std::int64_t>> layout;
  layout.reserve(static_cast<std::size_t>(n));
  std::int64_t m = 1;
  for (std::int64_t i = 1; i <= n; ++i) {
    while (scheme.boundary(m + 1) <= i) ++m;
    const std::int64_t t = scheme.boundary(m);
    layout.emplace_back(t, i - t + 1);
  }
  return layout;
}

namespace {

Eigen::VectorXd plain_mean(const std::vector<Eigen::VectorXd>& iterates) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(iterates.front().size());
  for (const auto& x : iterates) sum += x;
  return sum / static_cast<double>(iterates.size());
}

SchemeDesc describe(const BatchScheme& scheme) {
  return SchemeDesc{scheme.c(), scheme.beta(), scheme.alpha_hint()};
}

}  // namespace

CovarianceEstimate oracle_overlap(const std::vector<Eigen::VectorXd>& iterates,
                                  const BatchScheme& scheme) {
  if (iterates.empty()) throw NumericError("oracle_overlap: empty stream");
  const auto n = static_cast<std::int64_t>(iterates.size());
  const auto d = iterates.front().size();
  const Eigen::VectorXd xbar = plain_mean(iterates);
  const auto layout = oracle_batch_layout(n, scheme);

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd window = Eigen::VectorXd::Zero(d);
  std::int64_t denom = 0;
  for (std::int64_t i = 1; i <= n; ++i) {
    const auto [t, l] = layout[static_cast<std::size_t>(i - 1)];
    if (l == 1) {
      window = iterates[static_cast<std::size_t>(i - 1)];
    } else {
      window += iterates[static_cast<std::size_t>(i - 1)];
    }
    const Eigen::VectorXd centered = window - static_cast<double>(l) * xbar;
    acc.noalias() += centered * centered.transpose();
    denom += l;
  }
  CovarianceEstimate est;
  est.sigma = acc / static_cast<double>(denom);
  est.sigma = 0.5 * (est.sigma + est.sigma.transpose()).eval();
  est.n = n;
  est.scheme = describe(scheme);
  return est;
}

CovarianceEstimate oracle_nonoverlap(
    const std::vector<Eigen::VectorXd>& iterates, const BatchScheme& scheme) {
  if (iterates.empty()) throw NumericError("oracle_nonoverlap: empty stream");
  const auto n = static_cast<std::int64_t>(iterates.size());
  const auto d = iterates.front().size();
  const Eigen::VectorXd xbar = plain_mean(iterates);
  const auto layout = oracle_batch_layout(n, scheme);

  // S_n = {n} U {a_k - 1 : k > 1, a_k <= n}, assembled explicitly.
  std::vector<std::int64_t> members;
  for (std::int64_t k = 2; scheme.boundary(k) <= n; ++k) {
    members.push_back(scheme.boundary(k) - 1);
  }
  members.push_back(n);

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
  std::int64_t denom = 0;
  for (const std::int64_t i : members) {
    const auto [t, l] = layout[static_cast<std::size_t>(i - 1)];
    Eigen::VectorXd window = Eigen::VectorXd::Zero(d);
    for (std::int64_t k = t; k <= i; ++k) {
      window += iterates[static_cast<std::size_t>(k - 1)];
    }
    const Eigen::VectorXd centered = window - static_cast<double>(l) * xbar;
    acc.noalias() += centered * centered.transpose();
    denom += l;
  }
  CovarianceEstimate est;
  est.sigma = acc / static_cast<double>(denom);
  est.sigma = 0.5 * (est.sigma + est.sigma.transpose()).eval();
  est.n = n;
  est.scheme = describe(scheme);
  return est;
}

}  // namespace sgdinf
