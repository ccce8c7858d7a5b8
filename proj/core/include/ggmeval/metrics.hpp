#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ggmeval/matrix.hpp"

namespace ggmeval {

// Embedding matrices below hold one sample per row.

struct MomentSummary {
  std::vector<double> mean;
  DenseMatrix covariance;  // divisor N-1, symmetrized
};

MomentSummary moments(const DenseMatrix& x);

// Principal square root of a symmetric positive semi-definite matrix.
// Eigenvalues below 1e-12 * max(1, lambda_max) are clamped to zero.
// Throws NumericError if the input is not symmetric within 1e-8 (scaled by
// the largest entry).
DenseMatrix matrix_sqrt_psd(const DenseMatrix& a);

// |mu_r - mu_g|^2 + Tr(C_r + C_g - 2 (C_r^1/2 C_g C_r^1/2)^1/2), clamped at 0.
double frechet_distance(const DenseMatrix& real, const DenseMatrix& gen);

struct LinearKernel {};
struct RbfKernel {
  double sigma = 1.0;  // k(x, y) = exp(-|x - y|^2 / (2 sigma^2))
};
using KernelConfig = std::variant<LinearKernel, RbfKernel>;

// Biased (V-statistic) MMD^2 with diagonal terms included.
double mmd(const DenseMatrix& real, const DenseMatrix& gen,
           const KernelConfig& kernel);

// Median pairwise Euclidean distance among rows; 1.0 if that median is 0.
double rbf_sigma(const DenseMatrix& real);

// Distance from each row to its k-th nearest other row.
std::vector<double> knn_radii(const DenseMatrix& x, std::size_t k);

struct KnnConfig {
  std::size_t k = 5;
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

struct DensityCoverage {
  double density = 0.0;
  double coverage = 0.0;
};

// Closed kNN balls throughout.
PrecisionRecall precision_recall(const DenseMatrix& real, const DenseMatrix& gen,
                                 const KnnConfig& cfg);
DensityCoverage density_coverage(const DenseMatrix& real, const DenseMatrix& gen,
                                 const KnnConfig& cfg);

// Harmonic mean; 0 when a + b == 0.
double f1(double a, double b);

enum class Metric {
  kFd,
  kMmdLinear,
  kMmdRbf,
  kPrecision,
  kRecall,
  kF1Pr,
  kDensity,
  kCoverage,
  kF1Dc,
};

inline constexpr Metric kAllMetrics[] = {
    Metric::kFd,      Metric::kMmdLinear, Metric::kMmdRbf,
    Metric::kPrecision, Metric::kRecall,  Metric::kF1Pr,
    Metric::kDensity, Metric::kCoverage,  Metric::kF1Dc};

enum class Orientation { kDistanceUp, kSimilarityDown };

std::string_view to_string(Metric m);
std::optional<Metric> parse_metric(std::string_view name);
Orientation orientation(Metric m);

// Larger = more different. Similarity scores map to 1 - min(raw, 1).
double orient(Metric m, double raw);

struct MetricScore {
  double raw = 0.0;
  double oriented = 0.0;
};

struct MetricReport {
  std::vector<std::pair<Metric, MetricScore>> entries;  // configured order

  const MetricScore& at(Metric m) const;
};

struct MetricSuite {
  std::vector<Metric> metrics{std::begin(kAllMetrics), std::end(kAllMetrics)};
  KnnConfig knn;
  // RBF bandwidth; when unset, callers fill it from rbf_sigma(real).
  std::optional<double> rbf_sigma;
};

// Scores every configured metric of gen against real.
MetricReport evaluate_metrics(const DenseMatrix& real, const DenseMatrix& gen,
                              const MetricSuite& suite);

}  // namespace ggmeval
