#include "ggmeval/metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "ggmeval/common.hpp"

namespace ggmeval {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>;

Eigen::Map<const RowMajor> as_eigen(const DenseMatrix& m) {
  return {m.data().data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
  DenseMatrix out(static_cast<std::size_t>(m.rows()),
                  static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = m(r, c);
    }
  }
  return out;
}

void require_same_dim(const DenseMatrix& a, const DenseMatrix& b,
                      const char* op) {
  if (a.cols() != b.cols()) {
    throw ArgumentError(std::string(op) + ": dimension mismatch (" +
                        std::to_string(a.cols()) + " vs " +
                        std::to_string(b.cols()) + ")");
  }
}

double kernel_sum(const DenseMatrix& a, const DenseMatrix& b,
                  const KernelConfig& kernel) {
  double total = 0.0;
  if (std::holds_alternative<LinearKernel>(kernel)) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < b.rows(); ++j) total += dot(a.row(i), b.row(j));
    }
    return total;
  }
  const double sigma = std::get<RbfKernel>(kernel).sigma;
  const double denom = 2.0 * sigma * sigma;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      total += std::exp(-squared_distance(a.row(i), b.row(j)) / denom);
    }
  }
  return total;
}

// dist(i, j) = |a_i - b_j|.
DenseMatrix cross_distances(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix d(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      d(i, j) = euclidean_distance(a.row(i), b.row(j));
    }
  }
  return d;
}

void check_knn(std::size_t k, std::size_t n, const char* what) {
  if (k < 1 || k >= n) {
    throw ArgumentError(std::string(what) + ": k=" + std::to_string(k) +
                        " requires 1 <= k < " + std::to_string(n));
  }
}

// real_to_gen(i, j) = |real_i - gen_j|.
PrecisionRecall pr_from(const DenseMatrix& real_to_gen,
                        const std::vector<double>& real_radii,
                        const std::vector<double>& gen_radii) {
  const std::size_t nr = real_to_gen.rows();
  const std::size_t ng = real_to_gen.cols();
  std::size_t in_real = 0;
  for (std::size_t j = 0; j < ng; ++j) {
    for (std::size_t i = 0; i < nr; ++i) {
      if (real_to_gen(i, j) <= real_radii[i]) {
        ++in_real;
        break;
      }
    }
  }
  std::size_t in_gen = 0;
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < ng; ++j) {
      if (real_to_gen(i, j) <= gen_radii[j]) {
        ++in_gen;
        break;
      }
    }
  }
  return {static_cast<double>(in_real) / static_cast<double>(ng),
          static_cast<double>(in_gen) / static_cast<double>(nr)};
}

DensityCoverage dc_from(const DenseMatrix& real_to_gen,
                        const std::vector<double>& real_radii, std::size_t k) {
  const std::size_t nr = real_to_gen.rows();
  const std::size_t ng = real_to_gen.cols();
  std::size_t memberships = 0;
  std::size_t covered = 0;
  for (std::size_t i = 0; i < nr; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < ng; ++j) {
      if (real_to_gen(i, j) <= real_radii[i]) {
        ++memberships;
        any = true;
      }
    }
    if (any) ++covered;
  }
  return {static_cast<double>(memberships) /
              (static_cast<double>(k) * static_cast<double>(ng)),
          static_cast<double>(covered) / static_cast<double>(nr)};
}

}  // namespace

MomentSummary moments(const DenseMatrix& x) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (n < 2) throw ArgumentError("moments: need at least 2 samples");
  MomentSummary s;
  s.mean.assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) s.mean[c] += x(r, c);
  }
  for (double& m : s.mean) m /= static_cast<double>(n);
  DenseMatrix centered(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) centered(r, c) = x(r, c) - s.mean[c];
  }
  DenseMatrix cov = matmul_tn(centered, centered);
  const double denom = static_cast<double>(n - 1);
  s.covariance = DenseMatrix(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      s.covariance(i, j) = 0.5 * (cov(i, j) + cov(j, i)) / denom;
    }
  }
  return s;
}

DenseMatrix matrix_sqrt_psd(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("matrix_sqrt_psd: not square");
  if (a.rows() == 0) return {};
  double scale = 1.0;
  double asym = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      scale = std::max(scale, std::abs(a(i, j)));
      asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
    }
  }
  if (!(asym <= 1e-8 * scale)) {
    throw NumericError("matrix_sqrt_psd: matrix is not symmetric (max " +
                       std::to_string(asym) + ")");
  }
  const Eigen::MatrixXd m = as_eigen(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericError("matrix_sqrt_psd: eigendecomposition failed");
  }
  Eigen::VectorXd values = solver.eigenvalues();
  const double lambda_max = values.maxCoeff();
  const double floor = 1e-12 * std::max(1.0, lambda_max);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    values(i) = values(i) < floor ? 0.0 : std::sqrt(values(i));
  }
  const Eigen::MatrixXd& v = solver.eigenvectors();
  Eigen::MatrixXd root = v * values.asDiagonal() * v.transpose();
  root = 0.5 * (root + root.transpose()).eval();
  return from_eigen(root);
}

double frechet_distance(const DenseMatrix& real, const DenseMatrix& gen) {
  require_same_dim(real, gen, "frechet_distance");
  const MomentSummary r = moments(real);
  const MomentSummary g = moments(gen);
  const std::size_t d = real.cols();
  double mean_term = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    const double diff = r.mean[c] - g.mean[c];
    mean_term += diff * diff;
  }
  if (r.covariance == g.covariance) {
    // sqrt(C^{1/2} C C^{1/2}) = C, so the trace term vanishes.
    return mean_term;
  }
  const DenseMatrix root_r = matrix_sqrt_psd(r.covariance);
  DenseMatrix inner = matmul(matmul(root_r, g.covariance), root_r);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const double avg = 0.5 * (inner(i, j) + inner(j, i));
      inner(i, j) = avg;
      inner(j, i) = avg;
    }
  }
  const DenseMatrix cross = matrix_sqrt_psd(inner);
  double trace_term = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    trace_term += r.covariance(i, i) + g.covariance(i, i) - 2.0 * cross(i, i);
  }
  return std::max(0.0, mean_term + trace_term);
}

double mmd(const DenseMatrix& real, const DenseMatrix& gen,
           const KernelConfig& kernel) {
  require_same_dim(real, gen, "mmd");
  if (real.rows() == 0 || gen.rows() == 0) {
    throw ArgumentError("mmd: empty sample");
  }
  if (auto* rbf = std::get_if<RbfKernel>(&kernel);
      rbf && !(rbf->sigma > 0.0 && std::isfinite(rbf->sigma))) {
    throw ArgumentError("mmd: RBF sigma must be finite and positive");
  }
  const double m = static_cast<double>(real.rows());
  const double n = static_cast<double>(gen.rows());
  const double rr = kernel_sum(real, real, kernel) / (m * m);
  const double gg = kernel_sum(gen, gen, kernel) / (n * n);
  const double gr = kernel_sum(gen, real, kernel) / (n * m);
  return rr + gg - 2.0 * gr;
}

double rbf_sigma(const DenseMatrix& real) {
  if (real.rows() < 2) throw ArgumentError("rbf_sigma: need at least 2 rows");
  std::vector<double> d;
  d.reserve(real.rows() * (real.rows() - 1) / 2);
  for (std::size_t i = 0; i < real.rows(); ++i) {
    for (std::size_t j = i + 1; j < real.rows(); ++j) {
      d.push_back(euclidean_distance(real.row(i), real.row(j)));
    }
  }
  std::sort(d.begin(), d.end());
  const std::size_t mid = d.size() / 2;
  const double median = d.size() % 2 == 1 ? d[mid] : 0.5 * (d[mid - 1] + d[mid]);
  return median > 0.0 ? median : 1.0;
}

std::vector<double> knn_radii(const DenseMatrix& x, std::size_t k) {
  const std::size_t n = x.rows();
  check_knn(k, n, "knn_radii");
  std::vector<double> radii(n);
  std::vector<double> d;
  d.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    d.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) d.push_back(euclidean_distance(x.row(i), x.row(j)));
    }
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     d.end());
    radii[i] = d[k - 1];
  }
  return radii;
}

PrecisionRecall precision_recall(const DenseMatrix& real, const DenseMatrix& gen,
                                 const KnnConfig& cfg) {
  require_same_dim(real, gen, "precision_recall");
  check_knn(cfg.k, std::min(real.rows(), gen.rows()), "precision_recall");
  return pr_from(cross_distances(real, gen), knn_radii(real, cfg.k),
                 knn_radii(gen, cfg.k));
}

DensityCoverage density_coverage(const DenseMatrix& real, const DenseMatrix& gen,
                                 const KnnConfig& cfg) {
  require_same_dim(real, gen, "density_coverage");
  check_knn(cfg.k, real.rows(), "density_coverage");
  if (gen.rows() == 0) throw ArgumentError("density_coverage: empty gen set");
  return dc_from(cross_distances(real, gen), knn_radii(real, cfg.k), cfg.k);
}

double f1(double a, double b) {
  if (a + b == 0.0) return 0.0;
  return 2.0 * a * b / (a + b);
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::kFd: return "fd";
    case Metric::kMmdLinear: return "mmd-linear";
    case Metric::kMmdRbf: return "mmd-rbf";
    case Metric::kPrecision: return "precision";
    case Metric::kRecall: return "recall";
    case Metric::kF1Pr: return "f1-pr";
    case Metric::kDensity: return "density";
    case Metric::kCoverage: return "coverage";
    case Metric::kF1Dc: return "f1-dc";
  }
  return "unknown";
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

Orientation orientation(Metric m) {
  switch (m) {
    case Metric::kFd:
    case Metric::kMmdLinear:
    case Metric::kMmdRbf:
      return Orientation::kDistanceUp;
    default:
      return Orientation::kSimilarityDown;
  }
}

double orient(Metric m, double raw) {
  if (orientation(m) == Orientation::kDistanceUp) return raw;
  return 1.0 - std::min(raw, 1.0);
}

const MetricScore& MetricReport::at(Metric m) const {
  for (const auto& [metric, score] : entries) {
    if (metric == m) return score;
  }
  throw ArgumentError("metric " + std::string(to_string(m)) + " not in report");
}

MetricReport evaluate_metrics(const DenseMatrix& real, const DenseMatrix& gen,
                              const MetricSuite& suite) {
  require_same_dim(real, gen, "evaluate_metrics");
  auto wants = [&](std::initializer_list<Metric> ms) {
    return std::any_of(suite.metrics.begin(), suite.metrics.end(),
                       [&](Metric m) {
                         return std::find(ms.begin(), ms.end(), m) != ms.end();
                       });
  };
  const bool need_pr = wants({Metric::kPrecision, Metric::kRecall, Metric::kF1Pr});
  const bool need_dc = wants({Metric::kDensity, Metric::kCoverage, Metric::kF1Dc});

  std::optional<PrecisionRecall> pr;
  std::optional<DensityCoverage> dc;
  if (need_pr || need_dc) {
    const std::size_t k = suite.knn.k;
    check_knn(k, real.rows(), "kNN metrics (real set)");
    if (need_pr) check_knn(k, gen.rows(), "kNN metrics (generated set)");
    const DenseMatrix dist = cross_distances(real, gen);
    const std::vector<double> real_radii = knn_radii(real, k);
    if (need_pr) pr = pr_from(dist, real_radii, knn_radii(gen, k));
    if (need_dc) dc = dc_from(dist, real_radii, k);
  }

  MetricReport report;
  for (Metric m : suite.metrics) {
    double raw = 0.0;
    switch (m) {
      case Metric::kFd:
        raw = frechet_distance(real, gen);
        break;
      case Metric::kMmdLinear:
        raw = mmd(real, gen, LinearKernel{});
        break;
      case Metric::kMmdRbf:
        raw = mmd(real, gen,
                  RbfKernel{suite.rbf_sigma ? *suite.rbf_sigma : rbf_sigma(real)});
        break;
      case Metric::kPrecision: raw = pr->precision; break;
      case Metric::kRecall: raw = pr->recall; break;
      case Metric::kF1Pr: raw = f1(pr->precision, pr->recall); break;
      case Metric::kDensity: raw = dc->density; break;
      case Metric::kCoverage: raw = dc->coverage; break;
      case Metric::kF1Dc: raw = f1(std::min(dc->density, 1.0), dc->coverage); break;
    }
    if (!std::isfinite(raw)) {
      throw NumericError("metric " + std::string(to_string(m)) +
                         " is not finite");
    }
    report.entries.emplace_back(m, MetricScore{raw, orient(m, raw)});
  }
  return report;
}

}  // namespace ggmeval
