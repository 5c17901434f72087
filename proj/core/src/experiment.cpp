#include "sgdinf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "sgdinf/errors.hpp"
#include "sgdinf/inference.hpp"
#include "sgdinf/sgd.hpp"

namespace sgdinf {

namespace {

// Substream index reserved for drawing the true coefficients; replications
// use indices 0..reps-1.
constexpr std::uint64_t kCoefficientStream =
    std::numeric_limits<std::uint64_t>::max();

// Either streaming estimator behind one update/finalize surface.
class StreamingEstimator {
 public:
  StreamingEstimator(EstimatorKind kind, int dim, const BatchScheme& scheme) {
    if (kind == EstimatorKind::overlapping) {
      overlap_.emplace(dim, scheme);
    } else {
      nonoverlap_.emplace(dim, scheme);
    }
  }

  void update(const Eigen::VectorXd& x) {
    if (overlap_) {
      overlap_->update(x);
    } else {
      nonoverlap_->update(x);
    }
  }

  CovarianceEstimate finalize(const Eigen::VectorXd& xbar) const {
    return overlap_ ? overlap_->finalize(xbar) : nonoverlap_->finalize(xbar);
  }

 private:
  std::optional<OverlapCovariance> overlap_;
  std::optional<NonOverlapCovariance> nonoverlap_;
};

Eigen::VectorXd lower_triangle(const Eigen::MatrixXd& m) {
  const auto d = m.rows();
  Eigen::VectorXd out(d * (d + 1) / 2);
  Eigen::Index idx = 0;
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c <= r; ++c) out(idx++) = m(r, c);
  }
  return out;
}

std::vector<RunRecord> run_single_resolved(const ExperimentConfig& cfg,
                                           const Model& model,
                                           int rep_index) {
  const StepSchedule schedule(cfg.eta, cfg.alpha);
  const BatchScheme scheme(cfg.scheme_c, *cfg.beta);
  const Eigen::VectorXd& w = *cfg.functional;
  const Eigen::MatrixXd truth = model.true_sigma();
  const double target = w.dot(model.x_star());

  SgdState state(cfg.dim);
  StreamingEstimator estimator(cfg.estimator, cfg.dim, scheme);
  RngStream rng = RngStream::substream(cfg.master_seed, rep_index);

  std::vector<RunRecord> records;
  records.reserve(cfg.checkpoints.size());
  std::size_t next_cp = 0;
  for (std::int64_t i = 1; i <= cfg.n_max; ++i) {
    const Observation obs = model.draw(rng);
    sgd_step(state, obs, model, schedule);
    estimator.update(state.x);
    if (next_cp < cfg.checkpoints.size() && i == cfg.checkpoints[next_cp]) {
      const CovarianceEstimate est = estimator.finalize(state.xbar);
      const ConfidenceInterval ci =
          ci_linear(state.xbar, est, i, w, cfg.ci_q);
      RunRecord rec;
      rec.rep = rep_index;
      rec.step = i;
      rec.xbar = state.xbar;
      rec.sigma_lower = lower_triangle(est.sigma);
      rec.bias = w.dot((est.sigma - truth) * w);
      rec.loss = std::abs(rec.bias);
      rec.ci_lo = ci.lo;
      rec.ci_hi = ci.hi;
      rec.covered = ci.contains(target);
      rec.truth_known = true;
      records.push_back(std::move(rec));
      ++next_cp;
    }
  }
  return records;
}

}  // namespace

std::vector<std::int64_t> default_checkpoints(std::int64_t n_max) {
  constexpr int kCount = 20;
  const double lo = static_cast<double>(std::min<std::int64_t>(100, n_max));
  const double hi = static_cast<double>(n_max);
  std::vector<std::int64_t> cps;
  for (int k = 0; k < kCount; ++k) {
    const double f = (kCount == 1) ? 1.0 : static_cast<double>(k) / (kCount - 1);
    const double v = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
    auto step = static_cast<std::int64_t>(std::llround(v));
    step = std::clamp<std::int64_t>(step, 1, n_max);
    cps.push_back(step);
  }
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  return cps;
}

ExperimentConfig resolve(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  if (cfg.dim < 1) throw ConfigError("config: dim must be >= 1");
  if (cfg.model == ModelKind::mean_estimation && cfg.dim != 1) {
    throw ConfigError("config: mean estimation model is 1-dimensional");
  }
  if (cfg.n_max < 1) throw ConfigError("config: n must be >= 1");
  if (cfg.reps < 1) throw ConfigError("config: reps must be >= 1");
  if (!(cfg.ci_q > 0.0 && cfg.ci_q < 1.0)) {
    throw ConfigError("config: q must lie in (0, 1)");
  }
  if (cfg.threads < 0) throw ConfigError("config: threads must be >= 0");

  StepSchedule(cfg.eta, cfg.alpha);  // range checks
  if (!cfg.beta) cfg.beta = 2.0 / (1.0 - cfg.alpha);
  BatchScheme(cfg.scheme_c, *cfg.beta);

  if (cfg.checkpoints.empty()) {
    cfg.checkpoints = default_checkpoints(cfg.n_max);
  } else {
    if (!std::is_sorted(cfg.checkpoints.begin(), cfg.checkpoints.end())) {
      throw ConfigError("config: checkpoints must be sorted ascending");
    }
    for (const auto cp : cfg.checkpoints) {
      if (cp < 1 || cp > cfg.n_max) {
        throw ConfigError("config: checkpoint " + std::to_string(cp) +
                          " outside [1, n]");
      }
    }
    cfg.checkpoints.erase(
        std::unique(cfg.checkpoints.begin(), cfg.checkpoints.end()),
        cfg.checkpoints.end());
  }

  if (cfg.functional) {
    if (cfg.functional->size() != cfg.dim) {
      throw ConfigError("config: functional dimension must equal dim");
    }
    if (cfg.functional->isZero(0.0)) {
      throw ConfigError("config: functional must be nonzero");
    }
  } else {
    cfg.functional = Eigen::VectorXd::Ones(cfg.dim);
  }

  if (cfg.true_coeffs) {
    if (cfg.true_coeffs->size() != cfg.dim) {
      throw ConfigError("config: true coefficient dimension must equal dim");
    }
  } else {
    RngStream rng = RngStream::substream(cfg.master_seed, kCoefficientStream);
    Eigen::VectorXd coeffs(cfg.dim);
    for (int k = 0; k < cfg.dim; ++k) coeffs(k) = rng.uniform01();
    cfg.true_coeffs = std::move(coeffs);
  }
  return cfg;
}

std::unique_ptr<Model> make_model(const ExperimentConfig& resolved) {
  if (!resolved.true_coeffs) {
    throw ConfigError("make_model: config must be resolved first");
  }
  if (resolved.model == ModelKind::mean_estimation) {
    return std::make_unique<MeanEstimationModel>((*resolved.true_coeffs)(0),
                                                 resolved.noise_sd);
  }
  return std::make_unique<LinearRegressionModel>(*resolved.true_coeffs,
                                                 resolved.noise_sd);
}

std::vector<RunRecord> run_single(const ExperimentConfig& config,
                                  int rep_index) {
  const ExperimentConfig cfg = resolve(config);
  const auto model = make_model(cfg);
  return run_single_resolved(cfg, *model, rep_index);
}

AggregateReport run_replicated(const ExperimentConfig& config) {
  const ExperimentConfig cfg = resolve(config);
  const auto model = make_model(cfg);

  std::vector<std::vector<RunRecord>> all(static_cast<std::size_t>(cfg.reps));
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const int n_threads = std::min<int>(
      cfg.threads > 0 ? cfg.threads : static_cast<int>(hw), cfg.reps);

  std::atomic<int> next_rep{0};
  auto worker = [&]() {
    for (;;) {
      const int rep = next_rep.fetch_add(1);
      if (rep >= cfg.reps) return;
      all[static_cast<std::size_t>(rep)] =
          run_single_resolved(cfg, *model, rep);
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Deterministic reduce in replication order.
  AggregateReport report;
  report.config = cfg;
  const std::size_t n_cp = cfg.checkpoints.size();
  report.rows.resize(n_cp);
  for (std::size_t j = 0; j < n_cp; ++j) {
    CheckpointAggregate& row = report.rows[j];
    row.step = cfg.checkpoints[j];
    row.reps = cfg.reps;
    double sum_loss = 0.0, sum_sq = 0.0, sum_bias = 0.0;
    double sum_len = 0.0, sum_len_sq = 0.0;
    int covered = 0;
    for (int rep = 0; rep < cfg.reps; ++rep) {
      const RunRecord& rec = all[static_cast<std::size_t>(rep)][j];
      sum_loss += rec.loss;
      sum_sq += rec.bias * rec.bias;
      sum_bias += rec.bias;
      const double len = rec.ci_hi - rec.ci_lo;
      sum_len += len;
      sum_len_sq += len * len;
      covered += rec.covered ? 1 : 0;
    }
    const double r = static_cast<double>(cfg.reps);
    row.mean_loss = sum_loss / r;
    row.mean_sq_loss = sum_sq / r;
    row.mean_bias = sum_bias / r;
    row.coverage = static_cast<double>(covered) / r;
    row.mean_ci_length = sum_len / r;
    const double var_len =
        cfg.reps > 1
            ? (sum_len_sq - sum_len * sum_len / r) / (r - 1.0)
            : 0.0;
    row.sd_ci_length = std::sqrt(std::max(0.0, var_len));
  }
  return report;
}

double fit_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) {
    throw ConfigError("fit_slope: need at least two points");
  }
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& [n, v] : points) {
    if (!(n > 0.0) || !(v > 0.0)) {
      throw ConfigError("fit_slope: points must be positive");
    }
    mean_x += std::log(n);
    mean_y += std::log(v);
  }
  const double count = static_cast<double>(points.size());
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [n, v] : points) {
    const double dx = std::log(n) - mean_x;
    sxx += dx * dx;
    sxy += dx * (std::log(v) - mean_y);
  }
  if (sxx == 0.0) {
    throw ConfigError("fit_slope: all abscissae are equal");
  }
  return sxy / sxx;
}

}  // namespace sgdinf
