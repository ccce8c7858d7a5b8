#include "ggmeval/graph.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "ggmeval/common.hpp"

namespace ggmeval {

Graph::Graph(std::int64_t id, std::size_t num_nodes, std::vector<Edge> edges,
             std::optional<DenseMatrix> node_features,
             std::optional<std::vector<int>> node_labels)
    : id_(id),
      num_nodes_(num_nodes),
      edges_(std::move(edges)),
      node_features_(std::move(node_features)),
      node_labels_(std::move(node_labels)) {
  if (num_nodes_ > std::numeric_limits<NodeId>::max()) {
    throw ArgumentError("Graph: too many nodes");
  }
  std::vector<std::uint64_t> keys;
  keys.reserve(edges_.size());
  for (Edge& e : edges_) {
    if (e.u >= num_nodes_ || e.v >= num_nodes_) {
      throw ArgumentError("Graph " + std::to_string(id_) + ": edge (" +
                          std::to_string(e.u) + "," + std::to_string(e.v) +
                          ") out of range for " + std::to_string(num_nodes_) +
                          " nodes");
    }
    if (e.u == e.v) {
      throw ArgumentError("Graph " + std::to_string(id_) + ": self-loop at " +
                          std::to_string(e.u));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    keys.push_back(edge_key(e.u, e.v));
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    throw ArgumentError("Graph " + std::to_string(id_) + ": duplicate edge");
  }
  if (node_features_ && node_features_->rows() != num_nodes_) {
    throw ShapeError("Graph " + std::to_string(id_) +
                     ": feature rows != num_nodes");
  }
  if (node_labels_ && node_labels_->size() != num_nodes_) {
    throw ShapeError("Graph " + std::to_string(id_) +
                     ": label count != num_nodes");
  }
}

Graph Graph::with_features(DenseMatrix features) const {
  Graph g = *this;
  if (features.rows() != num_nodes_) {
    throw ShapeError("Graph::with_features: feature rows != num_nodes");
  }
  g.node_features_ = std::move(features);
  return g;
}

Graph Graph::without_features() const {
  Graph g = *this;
  g.node_features_.reset();
  return g;
}

Graph Graph::with_edges(std::vector<Edge> edges) const {
  return Graph(id_, num_nodes_, std::move(edges), node_features_,
               node_labels_);
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> deg(num_nodes_, 0);
  for (const Edge& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

std::vector<std::vector<NodeId>> Graph::adjacency_lists() const {
  std::vector<std::vector<NodeId>> adj(num_nodes_);
  for (const Edge& e : edges_) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

std::string_view to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::kMixingRandom:
      return "mixing";
    case PerturbationKind::kRewiringEdges:
      return "rewiring";
    case PerturbationKind::kModeCollapse:
      return "mode-collapse";
    case PerturbationKind::kModeDropping:
      return "mode-dropping";
  }
  return "unknown";
}

std::optional<PerturbationKind> parse_perturbation_kind(std::string_view name) {
  for (PerturbationKind kind : kAllPerturbationKinds) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

DatasetStats compute_stats(const GraphSet& set) {
  DatasetStats s;
  s.num_graphs = set.size();
  if (set.empty()) return s;
  s.min_nodes = s.min_edges = std::numeric_limits<std::size_t>::max();
  double node_sum = 0.0;
  double edge_sum = 0.0;
  for (const Graph& g : set.graphs) {
    s.min_nodes = std::min(s.min_nodes, g.num_nodes());
    s.max_nodes = std::max(s.max_nodes, g.num_nodes());
    s.min_edges = std::min(s.min_edges, g.num_edges());
    s.max_edges = std::max(s.max_edges, g.num_edges());
    node_sum += static_cast<double>(g.num_nodes());
    edge_sum += static_cast<double>(g.num_edges());
  }
  s.mean_nodes = node_sum / static_cast<double>(s.num_graphs);
  s.mean_edges = edge_sum / static_cast<double>(s.num_graphs);
  return s;
}

}  // namespace ggmeval
