#include <gtest/gtest.h>

#include <cmath>

#include "ggmeval/graph_ops.hpp"
#include "ggmeval/harness.hpp"
#include "test_support.hpp"

using namespace ggmeval;

namespace {

GraphSet er_corpus(std::size_t n, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.num_graphs = n;
  spec.min_nodes = 12;
  spec.max_nodes = 20;
  spec.min_edge_prob = 0.1;
  spec.max_edge_prob = 0.3;
  spec.seed = seed;
  return synthetic_er_corpus(spec);
}

}  // namespace

TEST(AverageRanks, Ties) {
  std::vector<double> v{1, 1, 2, 2};
  EXPECT_EQ(average_ranks(v), (std::vector<double>{1.5, 1.5, 3.5, 3.5}));
  std::vector<double> w{3, 1, 2};
  EXPECT_EQ(average_ranks(w), (std::vector<double>{3, 1, 2}));
}

TEST(Spearman, HandCases) {
  std::vector<double> x{1, 2, 3, 4};
  std::vector<double> up{2, 5, 9, 30};
  std::vector<double> down{9, 3, 1, -4};
  std::vector<double> ties{1, 1, 2, 2};
  std::vector<double> flat{7, 7, 7, 7};
  EXPECT_EQ(spearman(x, up), 1.0);
  EXPECT_EQ(spearman(x, down), -1.0);
  EXPECT_NEAR(spearman(x, ties), 4.0 / std::sqrt(20.0), 1e-12);
  EXPECT_EQ(spearman(x, flat), 0.0);
  EXPECT_THROW(spearman(flat, x), ArgumentError);
  EXPECT_THROW(spearman(std::vector<double>{1}, std::vector<double>{1}), ArgumentError);
  EXPECT_THROW(spearman(x, std::vector<double>{1, 2}), ArgumentError);
}

// Rank correlation depends only on ranks.
TEST(Spearman, InvariantUnderMonotoneMaps) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng.uniform_index(30);
    std::vector<double> x(n), y(n), fy(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(i);
      y[i] = std::round(rng.uniform_real(0, 5));
      fy[i] = std::exp(y[i]) * 3.0 - 2.0;
    }
    bool constant = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    if (constant) continue;
    EXPECT_NEAR(spearman(x, y), spearman(x, fy), 1e-12);
    const double rho = spearman(x, y);
    EXPECT_GE(rho, -1.0);
    EXPECT_LE(rho, 1.0);
  }
}

TEST(NormalizeScores, Cases) {
  std::vector<double> d{0, 1, 2};
  EXPECT_EQ(normalize_scores(d, Orientation::kDistanceUp), (std::vector<double>{0, 0.5, 1}));
  std::vector<double> f{1, 0.5, 0};
  EXPECT_EQ(normalize_scores(f, Orientation::kSimilarityDown), (std::vector<double>{0, 0.5, 1}));
  std::vector<double> c{3, 3, 3};
  EXPECT_EQ(normalize_scores(c, Orientation::kDistanceUp), (std::vector<double>{0, 0, 0}));
  std::vector<double> dens{1.8, 1.0, 0.4};
  EXPECT_EQ(normalize_scores(dens, Orientation::kSimilarityDown), (std::vector<double>{0, 0, 1}));
}

TEST(Quantile, LinearInterpolation) {
  EXPECT_EQ(quantile({1, 2, 3, 4}, 0.25), 1.75);
  EXPECT_EQ(quantile({4, 3, 2, 1}, 0.75), 3.25);
  EXPECT_EQ(quantile({0.1, 0.2, 0.3, 0.4, 0.5}, 0.5), 0.3);
  EXPECT_EQ(quantile({5}, 0.9), 5.0);
  EXPECT_THROW(quantile({}, 0.5), ArgumentError);
}

TEST(LevelSeverities, PerKind) {
  SweepOptions opt;
  opt.step = 0.25;
  opt.clusters = 4;
  EXPECT_EQ(level_severities(PerturbationKind::kMixingRandom, opt),
            (std::vector<double>{0, 0.25, 0.5, 0.75, 1}));
  EXPECT_EQ(level_severities(PerturbationKind::kModeCollapse, opt),
            (std::vector<double>{0, 0.25, 0.5, 0.75, 1}));
  auto drop = level_severities(PerturbationKind::kModeDropping, opt);
  ASSERT_EQ(drop.size(), 4u);
  EXPECT_EQ(drop.back(), 1.0);
  EXPECT_EQ(level_severities(PerturbationKind::kRewiringEdges, SweepOptions{}).size(), 101u);
}

TEST(RunSweep, StatsIdentityAtZero) {
  GraphSet real = er_corpus(40, 1);
  ExtractorConfig ex;
  SweepOptions opt;
  opt.step = 0.25;
  for (PerturbationKind kind : kAllPerturbationKinds) {
    opt.clusters = 4;
    SweepResult r = run_sweep(real, kind, ex, MetricSuite{}, opt, 3);
    ASSERT_FALSE(r.levels.empty());
    EXPECT_EQ(r.levels[0].t, 0.0);
    EXPECT_LE(r.levels[0].report.at(Metric::kFd).raw, 1e-9);
    EXPECT_LE(std::abs(r.levels[0].report.at(Metric::kMmdLinear).raw), 1e-9);
    EXPECT_LE(std::abs(r.levels[0].report.at(Metric::kMmdRbf).raw), 1e-9);
    EXPECT_EQ(r.spearman.size(), 9u);
  }
}

TEST(RunSweep, MixingStatsFdIsMonotone) {
  SyntheticSpec spec;
  spec.seed = 2;
  GraphSet real = synthetic_er_corpus(spec);
  ExtractorConfig ex;
  MetricSuite suite;
  suite.metrics = {Metric::kFd};
  SweepOptions opt;
  opt.step = 0.05;
  opt.mixing.edge_prob = 0.5;
  SweepResult r = run_sweep(real, PerturbationKind::kMixingRandom, ex, suite, opt, 4);
  EXPECT_GE(r.spearman_of(Metric::kFd), 0.9);
}

TEST(RunSweep, DeterministicAcrossWorkerCounts) {
  GraphSet real = er_corpus(30, 5);
  ExtractorConfig ex;
  ex.kind = ExtractorKind::kRandomGnn;
  ex.hidden_dim = 8;
  SweepOptions opt;
  opt.step = 0.2;
  opt.workers = 1;
  SweepResult a = run_sweep(real, PerturbationKind::kRewiringEdges, ex, MetricSuite{}, opt, 7);
  opt.workers = 4;
  SweepResult b = run_sweep(real, PerturbationKind::kRewiringEdges, ex, MetricSuite{}, opt, 7);
  ASSERT_EQ(a.levels.size(), b.levels.size());
  for (Metric m : kAllMetrics) {
    EXPECT_EQ(a.raw_series(m), b.raw_series(m));
    EXPECT_EQ(a.spearman_of(m), b.spearman_of(m));
  }
}

TEST(RunSweep, TooManyClustersIsConfigError) {
  GraphSet real = er_corpus(5, 6);
  SweepOptions opt;
  opt.clusters = 10;
  EXPECT_THROW(run_sweep(real, PerturbationKind::kModeCollapse, ExtractorConfig{}, MetricSuite{}, opt, 1),
               ConfigError);
}

TEST(RunSweep, KnnTooLargeNamesLevel) {
  GraphSet real = er_corpus(4, 7);
  MetricSuite suite;
  suite.metrics = {Metric::kPrecision};
  suite.knn.k = 10;
  SweepOptions opt;
  opt.step = 0.5;
  try {
    run_sweep(real, PerturbationKind::kMixingRandom, ExtractorConfig{}, suite, opt, 1);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("level"), std::string::npos);
  }
}

TEST(AggregateRuns, Cases) {
  SweepResult r;
  r.extractor = "stats";
  r.spearman = {{Metric::kFd, 0.8}};
  std::vector<SweepResult> same(5, r);
  auto s = aggregate_runs(same);
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_EQ(s.entries[0].median, 0.8);
  EXPECT_EQ(s.entries[0].iqr(), 0.0);
  std::vector<SweepResult> spread;
  for (double v : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    r.spearman = {{Metric::kFd, v}};
    spread.push_back(r);
  }
  EXPECT_EQ(aggregate_runs(spread).entries[0].median, 0.3);
  spread[1].extractor = "gmae";
  EXPECT_THROW(aggregate_runs(spread), ArgumentError);
}

TEST(Embedder, FitOnceAndReuse) {
  GraphSet real = er_corpus(20, 8);
  ExtractorConfig ex;
  ex.kind = ExtractorKind::kGmae;
  ex.gmae.epochs = 3;
  Embedder e = Embedder::fit(real, ex, 9);
  EXPECT_EQ(e.training_losses().size(), 3u);
  EXPECT_EQ(e.embed(real).data, e.embed(real, 3).data);
  ExtractorConfig pre = ex;
  pre.pretrained_gmae = *e.gmae_model();
  Embedder reused = Embedder::fit(real, pre, 123);
  EXPECT_EQ(reused.embed(real).data, e.embed(real).data);
  pre.features = DegreeOneHot{5};
  EXPECT_THROW(Embedder::fit(real, pre, 1), ConfigError);
}

TEST(RunExperiment, SeededRunsAndSummary) {
  GraphSet data = er_corpus(30, 10);
  ExperimentConfig cfg;
  cfg.kinds = {PerturbationKind::kMixingRandom, PerturbationKind::kModeDropping};
  cfg.metrics.metrics = {Metric::kFd, Metric::kCoverage};
  cfg.sweep.step = 0.25;
  cfg.sweep.clusters = 3;
  cfg.runs = 3;
  cfg.sample_size = 20;
  cfg.master_seed = 42;
  ExperimentResult a = run_experiment(data, cfg);
  ExperimentResult b = run_experiment(data, cfg);
  ASSERT_EQ(a.runs.size(), 3u);
  EXPECT_EQ(a.runs[0].num_graphs, 20u);
  EXPECT_NE(a.runs[0].run_seed, a.runs[1].run_seed);
  ASSERT_EQ(a.summary.entries.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(a.summary.entries[i].values, b.summary.entries[i].values);
    EXPECT_EQ(a.summary.entries[i].values.size(), 3u);
  }
}
