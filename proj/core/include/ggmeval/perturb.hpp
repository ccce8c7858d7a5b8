#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ggmeval/graph.hpp"
#include "ggmeval/matrix.hpp"

namespace ggmeval {

// Perturbation degree t in [0, 1].
class Severity {
 public:
  explicit Severity(double t);
  double value() const { return t_; }

  friend bool operator==(const Severity&, const Severity&) = default;

 private:
  double t_;
};

// [0, step, 2*step, ..., 1]; the last level is exactly 1.
std::vector<Severity> sweep_levels(double step);

struct MixingOptions {
  // Edge probability for the replacement E-R graphs. When unset, each
  // replacement keeps the replaced graph's edge density m / C(n, 2).
  std::optional<double> edge_prob;
};

// Positions mix_random replaces for (n, t, seed): round(t*n) distinct
// indices, sorted ascending.
std::vector<std::size_t> mixing_positions(std::size_t n, Severity t,
                                          std::uint64_t rng_seed);

// Replaces round(t*N) uniformly chosen graphs by E-R graphs with the same
// node count. Replacements keep the original id and node labels.
GraphSet mix_random(const GraphSet& set, Severity t, std::uint64_t rng_seed,
                    const MixingOptions& options = {});

// Rewires each edge independently with probability t: one endpoint (fair
// coin) is detached and the edge is reattached to a uniformly chosen node
// that yields neither a self-loop nor an existing edge. If no such node
// exists the edge is left as is. Node and edge counts are preserved.
GraphSet rewire_edges(const GraphSet& set, Severity t, std::uint64_t rng_seed);

struct ClusterAssignment {
  std::size_t num_clusters = 0;
  std::vector<std::size_t> labels;        // per graph
  std::vector<std::size_t> medoid_index;  // per cluster, index into the set

  std::vector<std::size_t> members(std::size_t cluster) const;
};

// k-medoids on a symmetric distance matrix. Medoids are initialized by
// sampling k distinct points; assignment (ties to the lower cluster index,
// each medoid pinned to its own cluster) and medoid update (ties to the
// lower point index) alternate until the labels stop changing or
// max_iterations is reached.
ClusterAssignment kmedoids(const DenseMatrix& distances, std::size_t k,
                           std::uint64_t rng_seed,
                           std::size_t max_iterations = 100);

// k-medoids over Euclidean distances between default graph descriptors.
ClusterAssignment cluster_graphs(const GraphSet& set, std::size_t k,
                                 std::uint64_t rng_seed);

// Replaces every member of n_collapsed randomly chosen clusters by a copy of
// the cluster medoid. Recorded severity is n_collapsed / k.
GraphSet mode_collapse(const GraphSet& set, const ClusterAssignment& clusters,
                       std::size_t n_collapsed, std::uint64_t rng_seed);

// Replaces every member of n_dropped randomly chosen clusters by graphs drawn
// uniformly with replacement from the remaining clusters. Requires
// n_dropped < k. Recorded severity is n_dropped / k.
GraphSet mode_drop(const GraphSet& set, const ClusterAssignment& clusters,
                   std::size_t n_dropped, std::uint64_t rng_seed);

}  // namespace ggmeval
