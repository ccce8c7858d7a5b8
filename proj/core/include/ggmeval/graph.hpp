#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ggmeval/matrix.hpp"

namespace ggmeval {

using NodeId = std::uint32_t;

// Undirected edge, stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::uint64_t edge_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Simple undirected graph with optional node features and labels. Instances
// are immutable; the constructor enforces the invariants (indices in range,
// no self-loops, no duplicate edges, feature rows == num_nodes).
class Graph {
 public:
  Graph() = default;
  Graph(std::int64_t id, std::size_t num_nodes, std::vector<Edge> edges,
        std::optional<DenseMatrix> node_features = std::nullopt,
        std::optional<std::vector<int>> node_labels = std::nullopt);

  std::int64_t id() const { return id_; }
  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::optional<DenseMatrix>& node_features() const {
    return node_features_;
  }
  const std::optional<std::vector<int>>& node_labels() const {
    return node_labels_;
  }

  Graph with_features(DenseMatrix features) const;
  Graph without_features() const;
  // Same id, node count, labels and features; new edge list.
  Graph with_edges(std::vector<Edge> edges) const;

  std::vector<std::size_t> degrees() const;
  // Sorted neighbor lists.
  std::vector<std::vector<NodeId>> adjacency_lists() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::int64_t id_ = 0;
  std::size_t num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::optional<DenseMatrix> node_features_;
  std::optional<std::vector<int>> node_labels_;
};

enum class PerturbationKind {
  kMixingRandom,
  kRewiringEdges,
  kModeCollapse,
  kModeDropping,
};

inline constexpr PerturbationKind kAllPerturbationKinds[] = {
    PerturbationKind::kMixingRandom, PerturbationKind::kRewiringEdges,
    PerturbationKind::kModeCollapse, PerturbationKind::kModeDropping};

// CLI names: mixing, rewiring, mode-collapse, mode-dropping.
std::string_view to_string(PerturbationKind kind);
std::optional<PerturbationKind> parse_perturbation_kind(std::string_view name);

struct Provenance {
  bool perturbed = false;
  PerturbationKind kind = PerturbationKind::kMixingRandom;
  double severity = 0.0;

  static Provenance real() { return {}; }
  static Provenance perturbation(PerturbationKind kind, double severity) {
    return {true, kind, severity};
  }

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// Ordered collection of graphs. Order is significant: cluster assignments and
// replacement operations are index-aligned with it.
struct GraphSet {
  std::vector<Graph> graphs;
  Provenance provenance;

  std::size_t size() const { return graphs.size(); }
  bool empty() const { return graphs.empty(); }
  const Graph& operator[](std::size_t i) const { return graphs[i]; }
};

struct DatasetStats {
  std::size_t num_graphs = 0;
  double mean_nodes = 0.0;
  std::size_t min_nodes = 0;
  std::size_t max_nodes = 0;
  double mean_edges = 0.0;
  std::size_t min_edges = 0;
  std::size_t max_edges = 0;
};

DatasetStats compute_stats(const GraphSet& set);

}  // namespace ggmeval
