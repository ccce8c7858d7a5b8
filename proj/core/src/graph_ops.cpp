#include "ggmeval/graph_ops.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "ggmeval/common.hpp"

namespace ggmeval {

GraphSet filter_by_size(const GraphSet& set, std::size_t min_nodes,
                        std::size_t max_nodes) {
  if (min_nodes < 1) throw ArgumentError("filter_by_size: min_nodes < 1");
  GraphSet out;
  out.provenance = set.provenance;
  for (const Graph& g : set.graphs) {
    if (g.num_nodes() >= min_nodes && g.num_nodes() <= max_nodes) {
      out.graphs.push_back(g);
    }
  }
  if (out.empty()) {
    throw EmptyDatasetError("no graphs with " + std::to_string(min_nodes) +
                            " <= nodes <= " + std::to_string(max_nodes));
  }
  return out;
}

GraphSet sample_subset(const GraphSet& set, std::size_t n,
                       std::uint64_t rng_seed) {
  if (n < 1 || n > set.size()) {
    throw ArgumentError("sample_subset: n=" + std::to_string(n) +
                        " outside [1, " + std::to_string(set.size()) + "]");
  }
  Rng rng(rng_seed);
  std::vector<std::size_t> picked = rng.sample_without_replacement(set.size(), n);
  std::sort(picked.begin(), picked.end());
  GraphSet out;
  out.provenance = set.provenance;
  out.graphs.reserve(n);
  for (std::size_t i : picked) out.graphs.push_back(set.graphs[i]);
  return out;
}

Graph erdos_renyi(std::size_t num_nodes, double edge_prob,
                  std::uint64_t rng_seed, std::int64_t id) {
  if (num_nodes < 1) throw ArgumentError("erdos_renyi: num_nodes < 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw ArgumentError("erdos_renyi: edge_prob outside [0,1]");
  }
  Rng rng(rng_seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < num_nodes; ++i) {
    for (std::size_t j = i + 1; j < num_nodes; ++j) {
      if (rng.uniform01() < edge_prob) {
        edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
      }
    }
  }
  return Graph(id, num_nodes, std::move(edges));
}

std::vector<double> clustering_coefficients(const Graph& g) {
  const auto adj = g.adjacency_lists();
  std::vector<double> cc(g.num_nodes(), 0.0);
  for (std::size_t v = 0; v < adj.size(); ++v) {
    const auto& nbrs = adj[v];
    const std::size_t deg = nbrs.size();
    if (deg < 2) continue;
    std::size_t closed = 0;
    for (std::size_t a = 0; a < deg; ++a) {
      const auto& na = adj[nbrs[a]];
      for (std::size_t b = a + 1; b < deg; ++b) {
        if (std::binary_search(na.begin(), na.end(), nbrs[b])) ++closed;
      }
    }
    cc[v] = static_cast<double>(closed) /
            (static_cast<double>(deg) * static_cast<double>(deg - 1) / 2.0);
  }
  return cc;
}

std::vector<double> graph_descriptor(const Graph& g, std::size_t degree_bins,
                                     std::size_t cc_bins) {
  if (degree_bins < 2) throw ArgumentError("graph_descriptor: degree_bins < 2");
  if (cc_bins < 1) throw ArgumentError("graph_descriptor: cc_bins < 1");
  std::vector<double> out(degree_bins + cc_bins, 0.0);
  const std::size_t n = g.num_nodes();
  if (n == 0) return out;
  std::vector<std::size_t> counts(out.size(), 0);
  for (std::size_t d : g.degrees()) ++counts[std::min(d, degree_bins - 1)];
  for (double c : clustering_coefficients(g)) {
    auto bin = static_cast<std::size_t>(c * static_cast<double>(cc_bins));
    ++counts[degree_bins + std::min(bin, cc_bins - 1)];
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  }
  return out;
}

DatasetPreset dataset_preset(std::string_view dataset_name) {
  std::string lower(dataset_name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower.rfind("proteins", 0) == 0) return {20, 1000};
  return {3, 1000};
}

}  // namespace ggmeval

namespace ggmeval {

GraphSet synthetic_er_corpus(const SyntheticSpec& spec) {
  if (spec.num_graphs < 1) throw ArgumentError("synthetic corpus: no graphs");
  if (spec.min_nodes < 1 || spec.min_nodes > spec.max_nodes) {
    throw ArgumentError("synthetic corpus: invalid node range");
  }
  if (!(spec.min_edge_prob >= 0.0 && spec.min_edge_prob <= spec.max_edge_prob &&
        spec.max_edge_prob <= 1.0)) {
    throw ArgumentError("synthetic corpus: invalid edge probability range");
  }
  Rng rng(spec.seed);
  GraphSet set;
  set.graphs.reserve(spec.num_graphs);
  for (std::size_t i = 0; i < spec.num_graphs; ++i) {
    const std::size_t n =
        spec.min_nodes + rng.uniform_index(spec.max_nodes - spec.min_nodes + 1);
    const double p = spec.min_edge_prob == spec.max_edge_prob
                         ? spec.min_edge_prob
                         : rng.uniform_real(spec.min_edge_prob, spec.max_edge_prob);
    set.graphs.push_back(erdos_renyi(n, p, derive_seed(spec.seed, {i}),
                                     static_cast<std::int64_t>(i + 1)));
  }
  return set;
}

}  // namespace ggmeval
