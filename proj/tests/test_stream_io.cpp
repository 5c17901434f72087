#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgdinf/batch_scheme.hpp"
#include "sgdinf/covariance.hpp"
#include "sgdinf/errors.hpp"
#include "sgdinf/models.hpp"
#include "sgdinf/sgd.hpp"
#include "sgdinf/stream_io.hpp"

using namespace sgdinf;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path((std::filesystem::temp_directory_path() / name).string()) {}
  ~TempFile() { std::remove(path.c_str()); }
  void write(const std::string& contents) const {
    std::ofstream out(path);
    out << contents;
  }
};

}  // namespace

TEST_CASE("reader yields one observation per data row") {
  TempFile file("sgdinf_reader_basic.csv");
  file.write("a1,a2,b\n1.0,2.0,3.0\n4.0,5.0,6.0\n\n7.0,8.0,9.0\n");
  StreamReader reader(file.path, StreamSchema{2, ',', true});
  int count = 0;
  while (auto obs = reader.next()) {
    CHECK(obs->covariates.size() == 2);
    ++count;
  }
  CHECK(count == 3);
}

TEST_CASE("scalar schema reads single-column rows") {
  TempFile file("sgdinf_reader_scalar.csv");
  file.write("0.5\n-1.25\n");
  StreamReader reader(file.path, StreamSchema{0, ',', false});
  auto first = reader.next();
  REQUIRE(first.has_value());
  CHECK(first->response == 0.5);
  CHECK(first->covariates.size() == 0);
  CHECK(reader.next()->response == -1.25);
  CHECK(!reader.next().has_value());
}

TEST_CASE("malformed rows name the offending line") {
  SUBCASE("wrong arity") {
    TempFile file("sgdinf_reader_arity.csv");
    file.write("1.0,2.0\n1.0,2.0,3.0\n");
    StreamReader reader(file.path, StreamSchema{1, ',', false});
    CHECK(reader.next().has_value());
    CHECK_THROWS_WITH_AS(reader.next(), doctest::Contains(":2:"), DataError);
  }
  SUBCASE("unparsable number") {
    TempFile file("sgdinf_reader_nan.csv");
    file.write("1.0\n2.x5\n");
    StreamReader reader(file.path, StreamSchema{0, ',', false});
    CHECK(reader.next().has_value());
    CHECK_THROWS_WITH_AS(reader.next(), doctest::Contains(":2:"), DataError);
  }
}

TEST_CASE("missing file is a data error") {
  CHECK_THROWS_AS(StreamReader("/nonexistent/sgdinf.csv", StreamSchema{}),
                  DataError);
}

TEST_CASE("tab delimiter") {
  TempFile file("sgdinf_reader_tabs.tsv");
  file.write("1.0\t2.0\t3.0\n");
  StreamReader reader(file.path, StreamSchema{2, '\t', false});
  auto obs = reader.next();
  REQUIRE(obs.has_value());
  CHECK(obs->response == 3.0);
}

TEST_CASE("written samples re-ingest to the identical estimator state") {
  const int dim = 2;
  const int total = 300;
  const LinearRegressionModel model(Eigen::Vector2d(0.4, -0.7));
  RngStream rng(91);
  std::vector<Observation> observations;
  for (int i = 0; i < total; ++i) observations.push_back(model.draw(rng));

  TempFile file("sgdinf_roundtrip.csv");
  {
    std::ofstream out(file.path);
    char buf[40];
    for (const auto& obs : observations) {
      for (int k = 0; k < dim; ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g", obs.covariates(k));
        out << buf << ',';
      }
      std::snprintf(buf, sizeof(buf), "%.17g", obs.response);
      out << buf << '\n';
    }
  }

  // Direct in-memory pipeline.
  const StepSchedule schedule(0.1, 0.501);
  const BatchScheme scheme = BatchScheme::for_alpha(2.0, 0.501);
  SgdState state(dim);
  OverlapCovariance cov(dim, scheme);
  for (const auto& obs : observations) {
    sgd_step(state, obs, model, schedule);
    cov.update(state.x);
  }
  const auto direct = cov.finalize(state.xbar);

  // The same rows through the file reader and run_stream.
  ExperimentConfig cfg;
  cfg.dim = dim;
  cfg.n_max = total;
  cfg.reps = 1;
  cfg.checkpoints = {total};
  StreamReader reader(file.path, StreamSchema{dim, ',', false});
  const auto records = run_stream(cfg, reader);
  REQUIRE(!records.empty());
  const auto& last = records.back();
  CHECK(last.step == total);
  // %.17g round-trips doubles exactly, so states agree bitwise.
  CHECK(last.xbar == state.xbar);
  Eigen::VectorXd lower(3);
  lower << direct.sigma(0, 0), direct.sigma(1, 0), direct.sigma(1, 1);
  CHECK(last.sigma_lower == lower);
}

TEST_CASE("run_stream rejects multiple replications and empty files") {
  TempFile file("sgdinf_stream_empty.csv");
  file.write("");
  ExperimentConfig cfg;
  cfg.dim = 1;
  cfg.reps = 2;
  cfg.n_max = 10;
  cfg.checkpoints = {10};
  {
    StreamReader reader(file.path, StreamSchema{1, ',', false});
    CHECK_THROWS_AS(run_stream(cfg, reader), ConfigError);
  }
  cfg.reps = 1;
  {
    StreamReader reader(file.path, StreamSchema{1, ',', false});
    CHECK_THROWS_AS(run_stream(cfg, reader), DataError);
  }
}

TEST_CASE("aggregate emission round-trips every numeric field") {
  AggregateReport report;
  report.config = resolve(ExperimentConfig{});
  CheckpointAggregate row;
  row.step = 12345;
  row.reps = 200;
  row.mean_loss = 0.12345678901234567;
  row.mean_sq_loss = 1.9999999999999998e-3;
  row.coverage = 0.915;
  row.mean_ci_length = 3.4799999999999999e-3;
  row.sd_ci_length = 8.1199999999999995e-4;
  row.mean_bias = -0.2097604032448513;
  report.rows = {row};

  std::ostringstream out;
  emit_aggregate(report, out, OutputFormat::csv);
  std::istringstream in(out.str());
  std::string header, line;
  std::getline(in, header);
  CHECK(header ==
        "step,reps,mean_loss,mean_sq_loss,coverage,mean_ci_length,"
        "sd_ci_length,mean_bias");
  std::getline(in, line);
  std::vector<std::string> fields;
  std::istringstream ls(line);
  std::string field;
  while (std::getline(ls, field, ',')) fields.push_back(field);
  REQUIRE(fields.size() == 8);
  CHECK(std::stoll(fields[0]) == row.step);
  CHECK(std::stod(fields[2]) == row.mean_loss);
  CHECK(std::stod(fields[3]) == row.mean_sq_loss);
  CHECK(std::stod(fields[4]) == row.coverage);
  CHECK(std::stod(fields[5]) == row.mean_ci_length);
  CHECK(std::stod(fields[6]) == row.sd_ci_length);
  CHECK(std::stod(fields[7]) == row.mean_bias);
}

TEST_CASE("empty report emits a header-only table") {
  AggregateReport report;
  report.config = resolve(ExperimentConfig{});
  std::ostringstream out;
  emit_aggregate(report, out, OutputFormat::csv);
  CHECK(out.str() ==
        "step,reps,mean_loss,mean_sq_loss,coverage,mean_ci_length,"
        "sd_ci_length,mean_bias\n");
}

TEST_CASE("metadata captures the resolved config") {
  ExperimentConfig cfg;
  cfg.dim = 3;
  cfg.master_seed = 987;
  cfg.n_max = 5000;
  cfg.reps = 7;
  const auto resolved = resolve(cfg);
  std::ostringstream out;
  emit_metadata(resolved, out);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["model"] == "linear-regression");
  CHECK(j["dim"] == 3);
  CHECK(j["master_seed"] == 987);
  CHECK(j["reps"] == 7);
  CHECK(j["beta"].get<double>() == doctest::Approx(2.0 / 0.499));
  CHECK(j["checkpoints"].size() == resolved.checkpoints.size());
  CHECK(j["true_coeffs"].size() == 3);
  CHECK(j["functional"] == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("name parsing") {
  CHECK(parse_model_kind("mean") == ModelKind::mean_estimation);
  CHECK(parse_model_kind("linear-regression") ==
        ModelKind::linear_regression);
  CHECK_THROWS_AS(parse_model_kind("logistic"), ConfigError);
  CHECK(parse_estimator_kind("overlapping") == EstimatorKind::overlapping);
  CHECK(parse_estimator_kind("nonoverlapping") ==
        EstimatorKind::nonoverlapping);
  CHECK_THROWS_AS(parse_estimator_kind("welford"), ConfigError);
  CHECK(parse_format("csv") == OutputFormat::csv);
  CHECK(parse_format("json") == OutputFormat::json);
  CHECK_THROWS_AS(parse_format("xml"), ConfigError);
}
