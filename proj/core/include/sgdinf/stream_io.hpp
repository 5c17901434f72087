#pragma once

#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sgdinf/experiment.hpp"
#include "sgdinf/observation.hpp"

namespace sgdinf {

// Column layout of a delimited observation file: either one response column
// (covariate_dim = 0) or covariate_dim covariate columns followed by the
// response.
struct StreamSchema {
  int covariate_dim = 0;
  char delimiter = ',';
  bool has_header = false;
};

// Row-at-a-time reader over a delimited text file; memory use is one line.
// Malformed rows raise DataError naming the offending line.
class StreamReader {
 public:
  StreamReader(std::string path, StreamSchema schema);

  // Next observation, or nullopt at end of file. Blank lines are skipped.
  std::optional<Observation> next();

  std::int64_t line() const { return line_; }

 private:
  std::string path_;
  StreamSchema schema_;
  std::ifstream in_;
  std::int64_t line_ = 0;
};

// Streams file rows through SGD and the configured covariance estimator.
// The truth is unknown, so records carry estimates and intervals only.
// Snapshots at config checkpoints that the stream reaches, plus the final
// row. reps must be 1 in this mode.
std::vector<RunRecord> run_stream(const ExperimentConfig& config,
                                  StreamReader& reader);

enum class OutputFormat { csv, json };

OutputFormat parse_format(const std::string& name);
ModelKind parse_model_kind(const std::string& name);
EstimatorKind parse_estimator_kind(const std::string& name);
std::string to_string(ModelKind kind);
std::string to_string(EstimatorKind kind);
std::string to_string(OutputFormat format);

// Checkpoint aggregate table, one row per checkpoint. Numbers are printed
// with round-trip precision, so equal inputs emit byte-identical files.
void emit_aggregate(const AggregateReport& report, std::ostream& out,
                    OutputFormat format);
void emit_aggregate(const AggregateReport& report, const std::string& path,
                    OutputFormat format);

// Several aggregate reports distinguished by their scheme constant C,
// concatenated with a leading `c` column.
void emit_sweep(const std::vector<AggregateReport>& reports, std::ostream& out,
                OutputFormat format);

// Single-stream trace table: averaged iterate, covariance lower triangle,
// and interval endpoints per checkpoint.
void emit_trace(const std::vector<RunRecord>& records, int dim,
                std::ostream& out, OutputFormat format);
void emit_trace(const std::vector<RunRecord>& records, int dim,
                const std::string& path, OutputFormat format);

// Resolved run configuration and master seed as a JSON object; together with
// the code version this reproduces the run bit for bit.
void emit_metadata(const ExperimentConfig& resolved, std::ostream& out);
void emit_metadata(const ExperimentConfig& resolved, const std::string& path);

}  // namespace sgdinf
