// Command-line front end: replicated simulation runs, file-stream runs, and
// a sweep over the batch scheme constant C. Tables go to --out (or stdout);
// when --out is set, the resolved config lands next to it in
// <out>.meta.json.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sgdinf/errors.hpp"
#include "sgdinf/experiment.hpp"
#include "sgdinf/stream_io.hpp"

namespace {

struct CliOptions {
  std::string model = "linear-regression";
  int dim = 1;
  double noise_sd = 1.0;
  double alpha = 0.501;
  double eta = 0.1;
  double scheme_c = 2.0;
  double beta = 0.0;  // 0 = derive from alpha
  std::string estimator = "overlapping";
  std::int64_t n = 1000000;
  int reps = 200;
  std::uint64_t seed = 42;
  double q = 0.05;
  std::vector<std::int64_t> checkpoints;
  std::vector<double> functional;
  std::vector<double> true_coeffs;
  std::string data;
  bool data_header = false;
  std::string delimiter = ",";
  std::string out;
  std::string format = "csv";
  int threads = 0;
  std::vector<double> c_values = {1.0, 2.0, 4.0};
};

void add_common_flags(CLI::App& cmd, CliOptions& opt) {
  cmd.add_option("--model", opt.model, "Model: mean | linear-regression");
  cmd.add_option("--d", opt.dim, "Parameter dimension");
  cmd.add_option("--noise-sd", opt.noise_sd, "Noise standard deviation");
  cmd.add_option("--alpha", opt.alpha, "Step decay exponent, in (0.5, 1)");
  cmd.add_option("--eta", opt.eta, "Base step scale");
  cmd.add_option("--beta", opt.beta,
                 "Batch growth exponent (> 1); 0 derives 2/(1-alpha)");
  cmd.add_option("--estimator", opt.estimator,
                 "Estimator: overlapping | nonoverlapping");
  cmd.add_option("--n", opt.n, "Total number of steps");
  cmd.add_option("--reps", opt.reps, "Number of replications");
  cmd.add_option("--seed", opt.seed, "Master seed");
  cmd.add_option("--q", opt.q, "CI tail mass (nominal coverage 1-q)");
  cmd.add_option("--checkpoints", opt.checkpoints,
                 "Snapshot steps (default: 20 log-spaced)")
      ->delimiter(',');
  cmd.add_option("--w", opt.functional,
                 "Linear functional weights (default: all ones)")
      ->delimiter(',');
  cmd.add_option("--x-star", opt.true_coeffs,
                 "True coefficients (default: seeded U(0,1) draws)")
      ->delimiter(',');
  cmd.add_option("--out", opt.out, "Output file (default: stdout)");
  cmd.add_option("--format", opt.format, "Output format: csv | json");
  cmd.add_option("--threads", opt.threads,
                 "Worker threads (0 = hardware concurrency)");
}

sgdinf::ExperimentConfig to_config(const CliOptions& opt) {
  sgdinf::ExperimentConfig cfg;
  cfg.model = sgdinf::parse_model_kind(opt.model);
  cfg.dim = opt.dim;
  cfg.noise_sd = opt.noise_sd;
  cfg.eta = opt.eta;
  cfg.alpha = opt.alpha;
  cfg.scheme_c = opt.scheme_c;
  if (opt.beta != 0.0) cfg.beta = opt.beta;
  cfg.estimator = sgdinf::parse_estimator_kind(opt.estimator);
  cfg.n_max = opt.n;
  cfg.checkpoints = opt.checkpoints;
  cfg.reps = opt.reps;
  cfg.master_seed = opt.seed;
  cfg.ci_q = opt.q;
  cfg.threads = opt.threads;
  if (!opt.functional.empty()) {
    cfg.functional = Eigen::Map<const Eigen::VectorXd>(
        opt.functional.data(), static_cast<Eigen::Index>(opt.functional.size()));
  }
  if (!opt.true_coeffs.empty()) {
    cfg.true_coeffs = Eigen::Map<const Eigen::VectorXd>(
        opt.true_coeffs.data(),
        static_cast<Eigen::Index>(opt.true_coeffs.size()));
  }
  return cfg;
}

char parse_delimiter(const std::string& s) {
  if (s == "\\t" || s == "tab") return '\t';
  if (s.size() != 1) {
    throw sgdinf::ConfigError("--delimiter must be a single character");
  }
  return s[0];
}

template <typename EmitFn>
void emit_with_metadata(const CliOptions& opt,
                        const sgdinf::ExperimentConfig& resolved,
                        EmitFn&& emit_fn) {
  const auto format = sgdinf::parse_format(opt.format);
  if (opt.out.empty()) {
    emit_fn(std::cout, format);
  } else {
    emit_fn(opt.out, format);
    sgdinf::emit_metadata(resolved, opt.out + ".meta.json");
  }
}

int cmd_run(const CliOptions& opt) {
  auto cfg = to_config(opt);

  if (!opt.data.empty()) {
    cfg.reps = 1;
    const auto resolved = sgdinf::resolve(cfg);
    sgdinf::StreamSchema schema;
    schema.covariate_dim =
        resolved.model == sgdinf::ModelKind::linear_regression ? resolved.dim
                                                               : 0;
    schema.delimiter = parse_delimiter(opt.delimiter);
    schema.has_header = opt.data_header;
    sgdinf::StreamReader reader(opt.data, schema);
    const auto records = sgdinf::run_stream(resolved, reader);
    emit_with_metadata(opt, resolved, [&](auto&& sink, auto format) {
      sgdinf::emit_trace(records, resolved.dim, sink, format);
    });
    return 0;
  }

  const auto report = sgdinf::run_replicated(cfg);
  emit_with_metadata(opt, report.config, [&](auto&& sink, auto format) {
    sgdinf::emit_aggregate(report, sink, format);
  });
  return 0;
}

int cmd_sweep_c(const CliOptions& opt) {
  auto cfg = to_config(opt);
  if (opt.c_values.empty()) {
    throw sgdinf::ConfigError("sweep-c: --c-values must be nonempty");
  }
  std::vector<sgdinf::AggregateReport> reports;
  reports.reserve(opt.c_values.size());
  for (const double c : opt.c_values) {
    cfg.scheme_c = c;
    reports.push_back(sgdinf::run_replicated(cfg));
  }
  const auto format = sgdinf::parse_format(opt.format);
  if (opt.out.empty()) {
    sgdinf::emit_sweep(reports, std::cout, format);
  } else {
    std::ofstream out(opt.out);
    if (!out) throw sgdinf::DataError("cannot open output file '" + opt.out + "'");
    sgdinf::emit_sweep(reports, out, format);
    sgdinf::emit_metadata(reports.front().config, opt.out + ".meta.json");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Streaming averaged SGD with online covariance estimation and "
      "confidence intervals"};
  app.require_subcommand(0, 1);

  CliOptions opt;

  auto* run = app.add_subcommand(
      "run", "Run a replicated experiment (or stream a data file)");
  add_common_flags(*run, opt);
  run->add_option("--scheme-c", opt.scheme_c, "Batch scheme constant C");
  run->add_option("--data", opt.data,
                  "Delimited observation file; streams rows instead of "
                  "simulating (forces one replication)");
  run->add_flag("--header", opt.data_header, "Data file has a header row");
  run->add_option("--delimiter", opt.delimiter,
                  "Data file delimiter (default ',', 'tab' for tabs)");

  auto* sweep = app.add_subcommand(
      "sweep-c", "Repeat an experiment across batch scheme constants C");
  add_common_flags(*sweep, opt);
  sweep->add_option("--c-values", opt.c_values, "C values to sweep")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (sweep->parsed()) return cmd_sweep_c(opt);
    return cmd_run(opt);  // bare `sgdinf` behaves as `sgdinf run`
  } catch (const sgdinf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const sgdinf::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const sgdinf::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
