#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ggmeval/extractors.hpp"
#include "ggmeval/graph.hpp"
#include "ggmeval/metrics.hpp"
#include "ggmeval/perturb.hpp"

namespace ggmeval {

// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of average ranks. Returns 0 when ys is constant.
// Throws ArgumentError on length mismatch, length < 2 or constant xs.
double spearman(std::span<const double> xs, std::span<const double> ys);

// Orients similarity-type series (1 - min(v, 1)) and min-max scales to
// [0, 1]; a constant series maps to zeros.
std::vector<double> normalize_scores(std::span<const double> series,
                                     Orientation orientation);

// Linear-interpolation quantile of unsorted data, q in [0, 1].
double quantile(std::vector<double> values, double q);

enum class ExtractorKind { kStats, kRandomGnn, kGmae };

std::string_view to_string(ExtractorKind kind);
std::optional<ExtractorKind> parse_extractor_kind(std::string_view name);

struct ExtractorConfig {
  ExtractorKind kind = ExtractorKind::kStats;
  // Random-GNN shape; the GMAE uses gmae.hidden_dim / gmae.num_layers.
  std::size_t hidden_dim = 32;
  std::size_t num_layers = 2;
  GmaeConfig gmae;
  // Node features for the neural extractors; chosen from the real set when
  // unset (see default_feature_spec).
  std::optional<FeatureSpec> features;
  // Previously trained GMAE to use instead of training (kind == kGmae).
  std::optional<GmaeModel> pretrained_gmae;
};

// An extractor fitted on a real set and then frozen: random weights are drawn
// or the GMAE is trained once, and every later embed() reuses them.
class Embedder {
 public:
  static Embedder fit(const GraphSet& real_set, const ExtractorConfig& cfg,
                      std::uint64_t seed);

  EmbeddingSet embed(const GraphSet& set, std::size_t workers = 1) const;

  ExtractorKind kind() const { return kind_; }
  std::string_view name() const { return to_string(kind_); }
  const std::vector<double>& training_losses() const {
    return gmae_ ? gmae_->epoch_losses : empty_;
  }
  const std::optional<GmaeModel>& gmae_model() const { return gmae_; }

 private:
  ExtractorKind kind_ = ExtractorKind::kStats;
  std::optional<FeatureSpec> features_;
  std::size_t num_layers_ = 0;
  std::string fingerprint_;
  ParamStore random_params_;
  std::optional<GmaeModel> gmae_;
  std::vector<double> empty_;
};

struct SweepOptions {
  double step = 0.01;
  std::size_t clusters = 10;
  MixingOptions mixing;
  std::size_t workers = 1;
};

struct SweepLevel {
  double t = 0.0;
  MetricReport report;
};

struct SweepResult {
  std::uint64_t run_seed = 0;
  std::string extractor;
  PerturbationKind kind = PerturbationKind::kMixingRandom;
  std::vector<SweepLevel> levels;
  std::vector<std::pair<Metric, double>> spearman;
  std::vector<std::pair<Metric, std::vector<double>>> normalized;

  double spearman_of(Metric m) const;
  std::vector<double> severities() const;
  std::vector<double> raw_series(Metric m) const;
  std::vector<double> oriented_series(Metric m) const;
};

// Severity t per level. Fidelity kinds use sweep_levels(step); mode collapse
// uses c / k for c = 0..k and mode dropping c / (k - 1) for c = 0..k-1.
std::vector<double> level_severities(PerturbationKind kind,
                                     const SweepOptions& options);

// Perturbs the real set at every level, embeds it with the frozen extractor,
// scores it against the real embedding and correlates the oriented scores
// with t. Per-level randomness derives from (run_seed, kind, level index).
SweepResult run_sweep(const GraphSet& real_set, PerturbationKind kind,
                      const Embedder& embedder, const MetricSuite& suite,
                      const SweepOptions& options, std::uint64_t run_seed);

// Convenience overload that fits the extractor on real_set first.
SweepResult run_sweep(const GraphSet& real_set, PerturbationKind kind,
                      const ExtractorConfig& extractor, const MetricSuite& suite,
                      const SweepOptions& options, std::uint64_t run_seed);

struct SummaryEntry {
  std::string extractor;
  PerturbationKind kind = PerturbationKind::kMixingRandom;
  Metric metric = Metric::kFd;
  std::vector<double> values;  // one Spearman coefficient per run
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr() const { return q3 - q1; }
};

struct ExperimentSummary {
  std::vector<SummaryEntry> entries;
};

// Groups per-metric Spearman values across runs. All results must share
// extractor, perturbation kind and metric list.
ExperimentSummary aggregate_runs(std::span<const SweepResult> results);

struct ExperimentConfig {
  ExtractorConfig extractor;
  std::vector<PerturbationKind> kinds{std::begin(kAllPerturbationKinds),
                                      std::end(kAllPerturbationKinds)};
  MetricSuite metrics;
  SweepOptions sweep;
  std::size_t runs = 5;
  std::uint64_t master_seed = 0;
  std::size_t sample_size = 1000;  // capped at the dataset size
};

struct RunRecord {
  std::size_t run_index = 0;
  std::uint64_t run_seed = 0;
  std::size_t num_graphs = 0;
  std::vector<double> training_losses;
  std::optional<GmaeModel> gmae_model;
  std::vector<SweepResult> sweeps;  // one per configured kind
  double seconds = 0.0;             // wall clock, not deterministic
};

struct ExperimentResult {
  std::vector<RunRecord> runs;
  ExperimentSummary summary;
};

// For each run: sample the real subset, fit the extractor once, sweep every
// configured perturbation kind. Runs derive their seeds from master_seed.
ExperimentResult run_experiment(const GraphSet& dataset,
                                const ExperimentConfig& cfg);

}  // namespace ggmeval
