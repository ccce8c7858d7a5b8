#include "ggmeval/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "ggmeval/common.hpp"
#include "ggmeval/graph_ops.hpp"

namespace ggmeval {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share rank mean((i+1)..(j+1)).
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t p = i; p <= j; ++p) ranks[order[p]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw ArgumentError("spearman: length mismatch");
  }
  if (xs.size() < 2) throw ArgumentError("spearman: need at least 2 points");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw ArgumentError("spearman: xs is constant");
  if (syy == 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> normalize_scores(std::span<const double> series,
                                     Orientation orientation) {
  if (series.size() < 2) {
    throw ArgumentError("normalize_scores: need at least 2 values");
  }
  std::vector<double> out(series.begin(), series.end());
  if (orientation == Orientation::kSimilarityDown) {
    for (double& v : out) v = 1.0 - std::min(v, 1.0);
  }
  const auto [lo, hi] = std::minmax_element(out.begin(), out.end());
  const double min = *lo;
  const double range = *hi - *lo;
  for (double& v : out) v = range > 0.0 ? (v - min) / range : 0.0;
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ArgumentError("quantile: empty input");
  if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("quantile: q outside [0,1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::string_view to_string(ExtractorKind kind) {
  switch (kind) {
    case ExtractorKind::kStats: return "stats";
    case ExtractorKind::kRandomGnn: return "random-gnn";
    case ExtractorKind::kGmae: return "gmae";
  }
  return "unknown";
}

std::optional<ExtractorKind> parse_extractor_kind(std::string_view name) {
  for (ExtractorKind k :
       {ExtractorKind::kStats, ExtractorKind::kRandomGnn, ExtractorKind::kGmae}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Embedder Embedder::fit(const GraphSet& real_set, const ExtractorConfig& cfg,
                       std::uint64_t seed) {
  if (real_set.empty()) throw ArgumentError("Embedder::fit: empty real set");
  Embedder e;
  e.kind_ = cfg.kind;
  if (cfg.kind == ExtractorKind::kStats) return e;

  e.features_ = cfg.features ? *cfg.features : default_feature_spec(real_set);
  const GraphSet featured = attach_features(real_set, *e.features_);
  const std::size_t in_dim = feature_dim(*e.features_);
  if (cfg.kind == ExtractorKind::kRandomGnn) {
    e.num_layers_ = cfg.num_layers;
    e.random_params_ =
        random_gnn_params(in_dim, cfg.hidden_dim, cfg.num_layers, seed);
    e.fingerprint_ = "random-gnn:h=" + std::to_string(cfg.hidden_dim) +
                     ",l=" + std::to_string(cfg.num_layers) +
                     ",seed=" + std::to_string(seed) + "," +
                     describe(*e.features_);
    return e;
  }
  if (cfg.pretrained_gmae) {
    if (cfg.pretrained_gmae->in_dim != in_dim) {
      throw ConfigError("pretrained GMAE expects " +
                        std::to_string(cfg.pretrained_gmae->in_dim) +
                        " input features, dataset provides " +
                        std::to_string(in_dim));
    }
    e.num_layers_ = cfg.pretrained_gmae->config.num_layers;
    e.gmae_ = cfg.pretrained_gmae;
    return e;
  }
  GmaeConfig gcfg = cfg.gmae;
  gcfg.seed = seed;
  e.num_layers_ = gcfg.num_layers;
  e.gmae_ = train_gmae(featured, gcfg);
  return e;
}

EmbeddingSet Embedder::embed(const GraphSet& set, std::size_t workers) const {
  switch (kind_) {
    case ExtractorKind::kStats:
      return extract_statistics(set, workers);
    case ExtractorKind::kRandomGnn:
      return embed_with_encoder(random_params_, num_layers_,
                                attach_features(set, *features_), "random-gnn",
                                fingerprint_, workers);
    case ExtractorKind::kGmae:
      return extract_gmae(*gmae_, attach_features(set, *features_), workers);
  }
  throw ConfigError("unknown extractor");
}

double SweepResult::spearman_of(Metric m) const {
  for (const auto& [metric, rho] : spearman) {
    if (metric == m) return rho;
  }
  throw ArgumentError("metric " + std::string(to_string(m)) + " not in sweep");
}

std::vector<double> SweepResult::severities() const {
  std::vector<double> t;
  t.reserve(levels.size());
  for (const SweepLevel& l : levels) t.push_back(l.t);
  return t;
}

std::vector<double> SweepResult::raw_series(Metric m) const {
  std::vector<double> v;
  v.reserve(levels.size());
  for (const SweepLevel& l : levels) v.push_back(l.report.at(m).raw);
  return v;
}

std::vector<double> SweepResult::oriented_series(Metric m) const {
  std::vector<double> v;
  v.reserve(levels.size());
  for (const SweepLevel& l : levels) v.push_back(l.report.at(m).oriented);
  return v;
}

std::vector<double> level_severities(PerturbationKind kind,
                                     const SweepOptions& options) {
  std::vector<double> t;
  const std::size_t k = options.clusters;
  switch (kind) {
    case PerturbationKind::kMixingRandom:
    case PerturbationKind::kRewiringEdges:
      for (Severity s : sweep_levels(options.step)) t.push_back(s.value());
      break;
    case PerturbationKind::kModeCollapse:
      if (k < 1) throw ConfigError("mode collapse needs at least 1 cluster");
      for (std::size_t c = 0; c <= k; ++c) {
        t.push_back(static_cast<double>(c) / static_cast<double>(k));
      }
      break;
    case PerturbationKind::kModeDropping:
      if (k < 2) throw ConfigError("mode dropping needs at least 2 clusters");
      for (std::size_t c = 0; c < k; ++c) {
        t.push_back(static_cast<double>(c) / static_cast<double>(k - 1));
      }
      break;
  }
  return t;
}

SweepResult run_sweep(const GraphSet& real_set, PerturbationKind kind,
                      const Embedder& embedder, const MetricSuite& suite,
                      const SweepOptions& options, std::uint64_t run_seed) {
  if (real_set.empty()) throw ArgumentError("run_sweep: empty real set");
  if (suite.metrics.empty()) throw ConfigError("run_sweep: no metrics");
  const std::vector<double> severities = level_severities(kind, options);

  std::optional<ClusterAssignment> clusters;
  if (kind == PerturbationKind::kModeCollapse ||
      kind == PerturbationKind::kModeDropping) {
    if (options.clusters > real_set.size()) {
      throw ConfigError("clusters=" + std::to_string(options.clusters) +
                        " exceeds the " + std::to_string(real_set.size()) +
                        " real graphs");
    }
    clusters = cluster_graphs(real_set, options.clusters,
                              derive_seed(run_seed, {0xC1u}));
  }

  const EmbeddingSet real_emb = embedder.embed(real_set, options.workers);
  MetricSuite fixed = suite;
  const bool wants_rbf = std::find(suite.metrics.begin(), suite.metrics.end(),
                                   Metric::kMmdRbf) != suite.metrics.end();
  if (wants_rbf && !fixed.rbf_sigma) fixed.rbf_sigma = rbf_sigma(real_emb.data);

  SweepResult result;
  result.run_seed = run_seed;
  result.extractor = std::string(embedder.name());
  result.kind = kind;
  result.levels.resize(severities.size());

  const auto kind_tag = static_cast<std::uint64_t>(kind);
  parallel_for(severities.size(), options.workers, [&](std::size_t level) {
    const std::uint64_t seed = derive_seed(run_seed, {kind_tag, level});
    const double t = severities[level];
    GraphSet perturbed;
    switch (kind) {
      case PerturbationKind::kMixingRandom:
        perturbed = mix_random(real_set, Severity(t), seed, options.mixing);
        break;
      case PerturbationKind::kRewiringEdges:
        perturbed = rewire_edges(real_set, Severity(t), seed);
        break;
      case PerturbationKind::kModeCollapse:
        perturbed = mode_collapse(real_set, *clusters, level, seed);
        break;
      case PerturbationKind::kModeDropping:
        perturbed = mode_drop(real_set, *clusters, level, seed);
        break;
    }
    const EmbeddingSet gen_emb = embedder.embed(perturbed, 1);
    try {
      result.levels[level] = {t, evaluate_metrics(real_emb.data, gen_emb.data, fixed)};
    } catch (const ArgumentError& e) {
      throw ConfigError("level " + std::to_string(level) + " (t=" +
                        std::to_string(t) + "): " + e.what());
    }
  });

  const std::vector<double> ts = result.severities();
  for (Metric m : suite.metrics) {
    const std::vector<double> oriented = result.oriented_series(m);
    result.spearman.emplace_back(m, spearman(ts, oriented));
    result.normalized.emplace_back(
        m, normalize_scores(result.raw_series(m), orientation(m)));
  }
  return result;
}

SweepResult run_sweep(const GraphSet& real_set, PerturbationKind kind,
                      const ExtractorConfig& extractor, const MetricSuite& suite,
                      const SweepOptions& options, std::uint64_t run_seed) {
  const Embedder embedder =
      Embedder::fit(real_set, extractor, derive_seed(run_seed, {0xE7u}));
  return run_sweep(real_set, kind, embedder, suite, options, run_seed);
}

ExperimentSummary aggregate_runs(std::span<const SweepResult> results) {
  ExperimentSummary summary;
  if (results.empty()) return summary;
  const SweepResult& first = results.front();
  for (const SweepResult& r : results) {
    bool same = r.extractor == first.extractor && r.kind == first.kind &&
                r.spearman.size() == first.spearman.size();
    for (std::size_t i = 0; same && i < r.spearman.size(); ++i) {
      same = r.spearman[i].first == first.spearman[i].first;
    }
    if (!same) {
      throw ArgumentError("aggregate_runs: results have mixed configurations");
    }
  }
  for (std::size_t i = 0; i < first.spearman.size(); ++i) {
    SummaryEntry e;
    e.extractor = first.extractor;
    e.kind = first.kind;
    e.metric = first.spearman[i].first;
    for (const SweepResult& r : results) e.values.push_back(r.spearman[i].second);
    e.median = quantile(e.values, 0.5);
    e.q1 = quantile(e.values, 0.25);
    e.q3 = quantile(e.values, 0.75);
    summary.entries.push_back(std::move(e));
  }
  return summary;
}

ExperimentResult run_experiment(const GraphSet& dataset,
                                const ExperimentConfig& cfg) {
  if (dataset.empty()) throw EmptyDatasetError("run_experiment: empty dataset");
  if (cfg.runs < 1) throw ConfigError("runs must be >= 1");
  if (cfg.kinds.empty()) throw ConfigError("no perturbation kinds configured");
  if (cfg.sample_size < 1) throw ConfigError("sample size must be >= 1");

  ExperimentResult result;
  for (std::size_t run = 0; run < cfg.runs; ++run) {
    const auto start = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.run_index = run;
    rec.run_seed = derive_seed(cfg.master_seed, {run});
    const GraphSet real =
        cfg.sample_size >= dataset.size()
            ? dataset
            : sample_subset(dataset, cfg.sample_size,
                            derive_seed(rec.run_seed, {0x5Au}));
    rec.num_graphs = real.size();
    const Embedder embedder =
        Embedder::fit(real, cfg.extractor, derive_seed(rec.run_seed, {0xE7u}));
    rec.training_losses = embedder.training_losses();
    rec.gmae_model = embedder.gmae_model();
    for (PerturbationKind kind : cfg.kinds) {
      rec.sweeps.push_back(
          run_sweep(real, kind, embedder, cfg.metrics, cfg.sweep, rec.run_seed));
    }
    rec.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    result.runs.push_back(std::move(rec));
  }
  for (std::size_t k = 0; k < cfg.kinds.size(); ++k) {
    std::vector<SweepResult> per_kind;
    for (const RunRecord& rec : result.runs) per_kind.push_back(rec.sweeps[k]);
    ExperimentSummary s = aggregate_runs(per_kind);
    for (SummaryEntry& e : s.entries) {
      result.summary.entries.push_back(std::move(e));
    }
  }
  return result;
}

}  // namespace ggmeval
