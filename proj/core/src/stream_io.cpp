#include "sgdinf/stream_io.hpp"

#include <charconv>
#include <cstdio>
#include <ostream>
#include <utility>

#include <json.hpp>

#include "sgdinf/errors.hpp"
#include "sgdinf/inference.hpp"
#include "sgdinf/sgd.hpp"

namespace sgdinf {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_field(const std::string& path, std::int64_t line,
                   std::string_view field) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw DataError(path + ":" + std::to_string(line) +
                    ": unparsable number '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& row, char delimiter) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = row.find(delimiter, start);
    if (pos == std::string::npos) {
      fields.push_back(row.substr(start));
      return fields;
    }
    fields.push_back(row.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

StreamReader::StreamReader(std::string path, StreamSchema schema)
    : path_(std::move(path)), schema_(schema), in_(path_) {
  if (schema_.covariate_dim < 0) {
    throw ConfigError("StreamReader: covariate_dim must be >= 0");
  }
  if (!in_) {
    throw DataError("cannot open data file '" + path_ + "'");
  }
  if (schema_.has_header) {
    std::string header;
    if (std::getline(in_, header)) ++line_;
  }
}

std::optional<Observation> StreamReader::next() {
  std::string row;
  while (std::getline(in_, row)) {
    ++line_;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.empty()) continue;
    const auto fields = split(row, schema_.delimiter);
    const std::size_t expected =
        static_cast<std::size_t>(schema_.covariate_dim) + 1;
    if (fields.size() != expected) {
      throw DataError(path_ + ":" + std::to_string(line_) + ": expected " +
                      std::to_string(expected) + " columns, found " +
                      std::to_string(fields.size()));
    }
    Observation obs;
    obs.covariates.resize(schema_.covariate_dim);
    for (int k = 0; k < schema_.covariate_dim; ++k) {
      obs.covariates(k) = parse_field(path_, line_, fields[static_cast<std::size_t>(k)]);
    }
    obs.response = parse_field(path_, line_, fields.back());
    return obs;
  }
  return std::nullopt;
}

std::vector<RunRecord> run_stream(const ExperimentConfig& config,
                                  StreamReader& reader) {
  const ExperimentConfig cfg = resolve(config);
  if (cfg.reps != 1) {
    throw ConfigError("run_stream: a fixed data file admits exactly one "
                      "replication (reps must be 1)");
  }
  const auto model = make_model(cfg);
  const StepSchedule schedule(cfg.eta, cfg.alpha);
  const BatchScheme scheme(cfg.scheme_c, *cfg.beta);
  const Eigen::VectorXd& w = *cfg.functional;

  SgdState state(cfg.dim);
  std::optional<OverlapCovariance> overlap;
  std::optional<NonOverlapCovariance> nonoverlap;
  if (cfg.estimator == EstimatorKind::overlapping) {
    overlap.emplace(cfg.dim, scheme);
  } else {
    nonoverlap.emplace(cfg.dim, scheme);
  }

  std::vector<RunRecord> records;
  std::size_t next_cp = 0;
  std::int64_t i = 0;

  auto snapshot = [&](std::int64_t step) {
    const CovarianceEstimate est = overlap ? overlap->finalize(state.xbar)
                                           : nonoverlap->finalize(state.xbar);
    const ConfidenceInterval ci = ci_linear(state.xbar, est, step, w, cfg.ci_q);
    RunRecord rec;
    rec.step = step;
    rec.xbar = state.xbar;
    Eigen::VectorXd lower(est.sigma.rows() * (est.sigma.rows() + 1) / 2);
    Eigen::Index idx = 0;
    for (Eigen::Index r = 0; r < est.sigma.rows(); ++r) {
      for (Eigen::Index c = 0; c <= r; ++c) lower(idx++) = est.sigma(r, c);
    }
    rec.sigma_lower = std::move(lower);
    rec.ci_lo = ci.lo;
    rec.ci_hi = ci.hi;
    rec.truth_known = false;
    records.push_back(std::move(rec));
  };

  while (i < cfg.n_max) {
    const auto obs = reader.next();
    if (!obs) break;
    if (cfg.model == ModelKind::linear_regression &&
        obs->covariates.size() != cfg.dim) {
      throw DataError("row " + std::to_string(reader.line()) +
                      ": covariate arity does not match --d");
    }
    sgd_step(state, *obs, *model, schedule);
    if (overlap) {
      overlap->update(state.x);
    } else {
      nonoverlap->update(state.x);
    }
    ++i;
    if (next_cp < cfg.checkpoints.size() && i == cfg.checkpoints[next_cp]) {
      snapshot(i);
      ++next_cp;
    }
  }
  if (i == 0) {
    throw DataError("data file contained no observations");
  }
  if (records.empty() || records.back().step != i) snapshot(i);
  return records;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("unknown output format '" + name + "' (csv|json)");
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "mean" || name == "mean-estimation") {
    return ModelKind::mean_estimation;
  }
  if (name == "linear-regression" || name == "regression") {
    return ModelKind::linear_regression;
  }
  throw ConfigError("unknown model '" + name + "' (mean|linear-regression)");
}

EstimatorKind parse_estimator_kind(const std::string& name) {
  if (name == "overlapping") return EstimatorKind::overlapping;
  if (name == "nonoverlapping") return EstimatorKind::nonoverlapping;
  throw ConfigError("unknown estimator '" + name +
                    "' (overlapping|nonoverlapping)");
}

std::string to_string(ModelKind kind) {
  return kind == ModelKind::mean_estimation ? "mean" : "linear-regression";
}

std::string to_string(EstimatorKind kind) {
  return kind == EstimatorKind::overlapping ? "overlapping" : "nonoverlapping";
}

std::string to_string(OutputFormat format) {
  return format == OutputFormat::csv ? "csv" : "json";
}

namespace {

constexpr const char* kAggregateHeader =
    "step,reps,mean_loss,mean_sq_loss,coverage,mean_ci_length,sd_ci_length,"
    "mean_bias";

void aggregate_row_csv(const CheckpointAggregate& row, std::ostream& out) {
  out << row.step << ',' << row.reps << ',' << fmt(row.mean_loss) << ','
      << fmt(row.mean_sq_loss) << ',' << fmt(row.coverage) << ','
      << fmt(row.mean_ci_length) << ',' << fmt(row.sd_ci_length) << ','
      << fmt(row.mean_bias) << '\n';
}

nlohmann::json aggregate_row_json(const CheckpointAggregate& row) {
  return nlohmann::json{{"step", row.step},
                        {"reps", row.reps},
                        {"mean_loss", row.mean_loss},
                        {"mean_sq_loss", row.mean_sq_loss},
                        {"coverage", row.coverage},
                        {"mean_ci_length", row.mean_ci_length},
                        {"sd_ci_length", row.sd_ci_length},
                        {"mean_bias", row.mean_bias}};
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json j{{"model", to_string(cfg.model)},
                   {"dim", cfg.dim},
                   {"noise_sd", cfg.noise_sd},
                   {"eta", cfg.eta},
                   {"alpha", cfg.alpha},
                   {"scheme_c", cfg.scheme_c},
                   {"estimator", to_string(cfg.estimator)},
                   {"n_max", cfg.n_max},
                   {"checkpoints", cfg.checkpoints},
                   {"reps", cfg.reps},
                   {"master_seed", cfg.master_seed},
                   {"ci_q", cfg.ci_q},
                   {"threads", cfg.threads}};
  if (cfg.beta) j["beta"] = *cfg.beta;
  if (cfg.functional) {
    j["functional"] = std::vector<double>(
        cfg.functional->data(), cfg.functional->data() + cfg.functional->size());
  }
  if (cfg.true_coeffs) {
    j["true_coeffs"] = std::vector<double>(
        cfg.true_coeffs->data(),
        cfg.true_coeffs->data() + cfg.true_coeffs->size());
  }
  return j;
}

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file '" + path + "'");
  return out;
}

}  // namespace

void emit_aggregate(const AggregateReport& report, std::ostream& out,
                    OutputFormat format) {
  if (format == OutputFormat::csv) {
    out << kAggregateHeader << '\n';
    for (const auto& row : report.rows) aggregate_row_csv(row, out);
    return;
  }
  nlohmann::json j;
  j["config"] = config_json(report.config);
  j["rows"] = nlohmann::json::array();
  for (const auto& row : report.rows) j["rows"].push_back(aggregate_row_json(row));
  out << j.dump(2) << '\n';
}

void emit_aggregate(const AggregateReport& report, const std::string& path,
                    OutputFormat format) {
  auto out = open_or_throw(path);
  emit_aggregate(report, out, format);
}

void emit_sweep(const std::vector<AggregateReport>& reports, std::ostream& out,
                OutputFormat format) {
  if (format == OutputFormat::csv) {
    out << "c," << kAggregateHeader << '\n';
    for (const auto& report : reports) {
      for (const auto& row : report.rows) {
        out << fmt(report.config.scheme_c) << ',';
        aggregate_row_csv(row, out);
      }
    }
    return;
  }
  nlohmann::json j = nlohmann::json::array();
  for (const auto& report : reports) {
    nlohmann::json entry;
    entry["config"] = config_json(report.config);
    entry["rows"] = nlohmann::json::array();
    for (const auto& row : report.rows) {
      entry["rows"].push_back(aggregate_row_json(row));
    }
    j.push_back(entry);
  }
  out << j.dump(2) << '\n';
}

void emit_trace(const std::vector<RunRecord>& records, int dim,
                std::ostream& out, OutputFormat format) {
  if (format == OutputFormat::csv) {
    out << "step";
    for (int k = 0; k < dim; ++k) out << ",xbar_" << k;
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c <= r; ++c) out << ",sigma_" << r << '_' << c;
    }
    out << ",ci_lo,ci_hi\n";
    for (const auto& rec : records) {
      out << rec.step;
      for (Eigen::Index k = 0; k < rec.xbar.size(); ++k) {
        out << ',' << fmt(rec.xbar(k));
      }
      for (Eigen::Index k = 0; k < rec.sigma_lower.size(); ++k) {
        out << ',' << fmt(rec.sigma_lower(k));
      }
      out << ',' << fmt(rec.ci_lo) << ',' << fmt(rec.ci_hi) << '\n';
    }
    return;
  }
  nlohmann::json j = nlohmann::json::array();
  for (const auto& rec : records) {
    nlohmann::json entry{{"step", rec.step},
                         {"ci_lo", rec.ci_lo},
                         {"ci_hi", rec.ci_hi}};
    entry["xbar"] =
        std::vector<double>(rec.xbar.data(), rec.xbar.data() + rec.xbar.size());
    entry["sigma_lower"] = std::vector<double>(
        rec.sigma_lower.data(), rec.sigma_lower.data() + rec.sigma_lower.size());
    j.push_back(entry);
  }
  out << j.dump(2) << '\n';
}

void emit_trace(const std::vector<RunRecord>& records, int dim,
                const std::string& path, OutputFormat format) {
  auto out = open_or_throw(path);
  emit_trace(records, dim, out, format);
}

void emit_metadata(const ExperimentConfig& resolved, std::ostream& out) {
  out << config_json(resolved).dump(2) << '\n';
}

void emit_metadata(const ExperimentConfig& resolved, const std::string& path) {
  auto out = open_or_throw(path);
  emit_metadata(resolved, out);
}

}  // namespace sgdinf
