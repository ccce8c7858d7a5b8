#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ggmeval/graph.hpp"

namespace ggmeval {

// Keeps graphs with min_nodes <= num_nodes <= max_nodes, preserving order.
// Throws EmptyDatasetError if nothing survives.
GraphSet filter_by_size(const GraphSet& set, std::size_t min_nodes,
                        std::size_t max_nodes);

// Uniform sample of n graphs without replacement, in original relative order.
GraphSet sample_subset(const GraphSet& set, std::size_t n,
                       std::uint64_t rng_seed);

// G(n, p): each of the n(n-1)/2 pairs is included independently.
Graph erdos_renyi(std::size_t num_nodes, double edge_prob,
                  std::uint64_t rng_seed, std::int64_t id = 0);

// Local clustering coefficient per node; nodes of degree < 2 get 0.
std::vector<double> clustering_coefficients(const Graph& g);

struct DescriptorConfig {
  std::size_t degree_bins = 64;  // last bin collects degree >= degree_bins-1
  std::size_t cc_bins = 10;
};

// Normalized degree histogram followed by normalized clustering-coefficient
// histogram; dimension degree_bins + cc_bins.
std::vector<double> graph_descriptor(const Graph& g, std::size_t degree_bins,
                                     std::size_t cc_bins);
inline std::vector<double> graph_descriptor(const Graph& g,
                                            const DescriptorConfig& cfg = {}) {
  return graph_descriptor(g, cfg.degree_bins, cfg.cc_bins);
}

// Size filter applied to a named dataset unless overridden.
struct DatasetPreset {
  std::size_t min_nodes = 3;
  std::size_t max_nodes = 1000;
};

// PROTEINS* datasets drop graphs below 20 nodes; every other dataset below 3.
DatasetPreset dataset_preset(std::string_view dataset_name);

}  // namespace ggmeval

namespace ggmeval {

// Parameters of a synthetic E-R corpus; node count and edge probability are
// drawn uniformly per graph from the closed ranges.
struct SyntheticSpec {
  std::size_t num_graphs = 200;
  std::size_t min_nodes = 30;
  std::size_t max_nodes = 30;
  double min_edge_prob = 0.1;
  double max_edge_prob = 0.1;
  std::uint64_t seed = 0;
};

// Graph ids are 1..num_graphs.
GraphSet synthetic_er_corpus(const SyntheticSpec& spec);

}  // namespace ggmeval
