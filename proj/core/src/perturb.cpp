#include "ggmeval/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include "ggmeval/common.hpp"
#include "ggmeval/graph_ops.hpp"

namespace ggmeval {

namespace {

void require_real(const GraphSet& set, const char* op) {
  if (set.provenance.perturbed) {
    throw ArgumentError(std::string(op) + ": input set must be the real set");
  }
}

void check_clusters(const GraphSet& set, const ClusterAssignment& clusters) {
  if (clusters.labels.size() != set.size() ||
      clusters.medoid_index.size() != clusters.num_clusters) {
    throw ArgumentError("cluster assignment does not match the graph set");
  }
}

}  // namespace

Severity::Severity(double t) : t_(t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ArgumentError("severity " + std::to_string(t) + " outside [0,1]");
  }
}

std::vector<Severity> sweep_levels(double step) {
  if (!(step > 0.0 && step <= 1.0)) {
    throw ArgumentError("sweep step must lie in (0, 1]");
  }
  std::vector<Severity> levels;
  // Levels closer than this to 1 are folded into the final exact 1.
  constexpr double kSnap = 1e-9;
  for (std::size_t i = 0;; ++i) {
    const double t = static_cast<double>(i) * step;
    if (t >= 1.0 - kSnap) break;
    levels.emplace_back(t);
  }
  levels.emplace_back(1.0);
  return levels;
}

std::vector<std::size_t> mixing_positions(std::size_t n, Severity t,
                                          std::uint64_t rng_seed) {
  const auto count = static_cast<std::size_t>(
      std::llround(t.value() * static_cast<double>(n)));
  Rng rng(derive_seed(rng_seed, {0}));
  std::vector<std::size_t> positions =
      rng.sample_without_replacement(n, std::min(count, n));
  std::sort(positions.begin(), positions.end());
  return positions;
}

GraphSet mix_random(const GraphSet& set, Severity t, std::uint64_t rng_seed,
                    const MixingOptions& options) {
  require_real(set, "mix_random");
  if (options.edge_prob &&
      !(*options.edge_prob >= 0.0 && *options.edge_prob <= 1.0)) {
    throw ArgumentError("mix_random: edge_prob outside [0,1]");
  }
  GraphSet out = set;
  out.provenance =
      Provenance::perturbation(PerturbationKind::kMixingRandom, t.value());
  for (std::size_t pos : mixing_positions(set.size(), t, rng_seed)) {
    const Graph& original = set[pos];
    const std::size_t n = original.num_nodes();
    double p = 0.0;
    if (options.edge_prob) {
      p = *options.edge_prob;
    } else if (n >= 2) {
      const double pairs =
          static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
      p = std::min(1.0, static_cast<double>(original.num_edges()) / pairs);
    }
    Graph er = erdos_renyi(n, p, derive_seed(rng_seed, {1, pos}),
                           original.id());
    out.graphs[pos] = Graph(original.id(), n, er.edges(), std::nullopt,
                            original.node_labels());
  }
  return out;
}

GraphSet rewire_edges(const GraphSet& set, Severity t, std::uint64_t rng_seed) {
  require_real(set, "rewire_edges");
  GraphSet out;
  out.provenance =
      Provenance::perturbation(PerturbationKind::kRewiringEdges, t.value());
  out.graphs.reserve(set.size());
  // Random draws tried before falling back to enumerating valid targets.
  constexpr int kRejectionTries = 32;
  for (std::size_t gi = 0; gi < set.size(); ++gi) {
    const Graph& g = set[gi];
    Rng rng(derive_seed(rng_seed, {gi}));
    const auto n = static_cast<NodeId>(g.num_nodes());
    std::vector<Edge> edges = g.edges();
    std::unordered_set<std::uint64_t> present;
    present.reserve(edges.size() * 2);
    for (const Edge& e : edges) present.insert(edge_key(e.u, e.v));

    for (Edge& e : edges) {
      if (!(rng.uniform01() < t.value())) continue;
      // The picked endpoint is detached; the other one stays.
      const NodeId keep = rng.coin() ? e.u : e.v;
      auto valid = [&](NodeId target) {
        return target != keep && !present.contains(edge_key(keep, target));
      };
      std::optional<NodeId> target;
      for (int attempt = 0; attempt < kRejectionTries && !target; ++attempt) {
        const auto c = static_cast<NodeId>(rng.uniform_index(n));
        if (valid(c)) target = c;
      }
      if (!target) {
        std::vector<NodeId> candidates;
        for (NodeId c = 0; c < n; ++c) {
          if (valid(c)) candidates.push_back(c);
        }
        if (candidates.empty()) continue;
        target = candidates[rng.uniform_index(candidates.size())];
      }
      present.erase(edge_key(e.u, e.v));
      present.insert(edge_key(keep, *target));
      e = Edge{std::min(keep, *target), std::max(keep, *target)};
    }
    out.graphs.push_back(g.with_edges(std::move(edges)));
  }
  return out;
}

std::vector<std::size_t> ClusterAssignment::members(std::size_t cluster) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == cluster) out.push_back(i);
  }
  return out;
}

ClusterAssignment kmedoids(const DenseMatrix& distances, std::size_t k,
                           std::uint64_t rng_seed,
                           std::size_t max_iterations) {
  const std::size_t n = distances.rows();
  if (distances.cols() != n) throw ShapeError("kmedoids: non-square matrix");
  if (k < 1 || k > n) {
    throw ArgumentError("kmedoids: k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(n) + "]");
  }
  Rng rng(rng_seed);
  std::vector<std::size_t> medoids = rng.sample_without_replacement(n, k);

  auto assign = [&](const std::vector<std::size_t>& meds) {
    std::vector<std::size_t> labels(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = distances(i, meds[c]);
        if (d < best) {
          best = d;
          labels[i] = c;
        }
      }
    }
    // Pinning medoids keeps every cluster non-empty under duplicate points.
    for (std::size_t c = 0; c < k; ++c) labels[meds[c]] = c;
    return labels;
  };
  auto update = [&](const std::vector<std::size_t>& labels) {
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < n; ++i) members[labels[i]].push_back(i);
    std::vector<std::size_t> meds(k);
    for (std::size_t c = 0; c < k; ++c) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t cand : members[c]) {
        double total = 0.0;
        for (std::size_t other : members[c]) total += distances(cand, other);
        if (total < best) {
          best = total;
          meds[c] = cand;
        }
      }
    }
    return meds;
  };

  std::vector<std::size_t> labels = assign(medoids);
  bool converged = false;
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    std::vector<std::size_t> next_medoids = update(labels);
    std::vector<std::size_t> next_labels = assign(next_medoids);
    medoids = std::move(next_medoids);
    if (next_labels == labels) {
      converged = true;
      break;
    }
    labels = std::move(next_labels);
  }
  if (!converged) medoids = update(labels);

  ClusterAssignment out;
  out.num_clusters = k;
  out.labels = std::move(labels);
  out.medoid_index = std::move(medoids);
  return out;
}

ClusterAssignment cluster_graphs(const GraphSet& set, std::size_t k,
                                 std::uint64_t rng_seed) {
  if (k < 1 || k > set.size()) {
    throw ArgumentError("cluster_graphs: k=" + std::to_string(k) +
                        " outside [1, " + std::to_string(set.size()) + "]");
  }
  std::vector<std::vector<double>> desc;
  desc.reserve(set.size());
  for (const Graph& g : set.graphs) desc.push_back(graph_descriptor(g));
  DenseMatrix dist(set.size(), set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const double d = euclidean_distance(desc[i], desc[j]);
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return kmedoids(dist, k, rng_seed);
}

GraphSet mode_collapse(const GraphSet& set, const ClusterAssignment& clusters,
                       std::size_t n_collapsed, std::uint64_t rng_seed) {
  check_clusters(set, clusters);
  const std::size_t k = clusters.num_clusters;
  if (n_collapsed > k) {
    throw ArgumentError("mode_collapse: n_collapsed > num_clusters");
  }
  Rng rng(rng_seed);
  std::vector<std::size_t> chosen = rng.sample_without_replacement(k, n_collapsed);
  std::vector<bool> collapsed(k, false);
  for (std::size_t c : chosen) collapsed[c] = true;

  GraphSet out = set;
  out.provenance = Provenance::perturbation(
      PerturbationKind::kModeCollapse,
      static_cast<double>(n_collapsed) / static_cast<double>(k));
  for (std::size_t i = 0; i < set.size(); ++i) {
    const std::size_t c = clusters.labels[i];
    if (collapsed[c]) out.graphs[i] = set[clusters.medoid_index[c]];
  }
  return out;
}

GraphSet mode_drop(const GraphSet& set, const ClusterAssignment& clusters,
                   std::size_t n_dropped, std::uint64_t rng_seed) {
  check_clusters(set, clusters);
  const std::size_t k = clusters.num_clusters;
  if (n_dropped >= k) {
    throw ArgumentError("mode_drop: n_dropped must be < num_clusters (" +
                        std::to_string(k) + ")");
  }
  Rng rng(rng_seed);
  std::vector<std::size_t> chosen = rng.sample_without_replacement(k, n_dropped);
  std::vector<bool> dropped(k, false);
  for (std::size_t c : chosen) dropped[c] = true;

  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (!dropped[clusters.labels[i]]) pool.push_back(i);
  }
  GraphSet out = set;
  out.provenance = Provenance::perturbation(
      PerturbationKind::kModeDropping,
      static_cast<double>(n_dropped) / static_cast<double>(k));
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (dropped[clusters.labels[i]]) {
      out.graphs[i] = set[pool[rng.uniform_index(pool.size())]];
    }
  }
  return out;
}

}  // namespace ggmeval
