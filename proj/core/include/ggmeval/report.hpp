#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ggmeval/graph.hpp"
#include "ggmeval/graph_ops.hpp"
#include "ggmeval/harness.hpp"

namespace ggmeval {

inline constexpr int kReportSchemaVersion = 1;

// Where the real graphs come from.
struct DatasetSource {
  std::string dir;   // TUDataset directory, empty for synthetic corpora
  std::string name;  // TUDataset name
  std::optional<SyntheticSpec> synthetic;
  std::size_t min_nodes = 3;
  std::size_t max_nodes = 1000;
};

struct RunConfig {
  DatasetSource dataset;
  ExperimentConfig experiment;
  std::string out_path;
  std::string csv_path;
};

struct ReportDocument {
  RunConfig config;
  DatasetStats dataset_stats;
  ExperimentResult result;
  double total_seconds = 0.0;
};

// Structured report. Wall-clock values live under the top-level "timings"
// key only; everything else is a deterministic function of the config.
std::string render_report_json(const ReportDocument& doc);

// One row per (run, perturbation, metric, level).
std::string render_report_csv(const ReportDocument& doc);

// Per-run Spearman values read back from a report, for plotting.
struct ReportGroup {
  std::string extractor;
  std::string perturbation;
  std::string metric;
  std::vector<double> values;
};

// Throws ConfigError for an unknown schema_version and FormatError for
// documents that do not parse.
std::vector<ReportGroup> parse_report_groups(const std::string& json_text);

}  // namespace ggmeval
