#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ggmeval/graph.hpp"
#include "ggmeval/matrix.hpp"
#include "ggmeval/nn.hpp"

namespace ggmeval {

// One row per graph, aligned with the input set order.
struct EmbeddingSet {
  DenseMatrix data;
  std::string extractor;
  std::string fingerprint;

  std::size_t size() const { return data.rows(); }
  std::size_t dim() const { return data.cols(); }
};

struct NodeLabelOneHot {
  std::size_t num_classes = 0;
};
// One-hot of min(degree, cap); dimension cap + 1.
struct DegreeOneHot {
  std::size_t cap = 63;
};
using FeatureSpec = std::variant<NodeLabelOneHot, DegreeOneHot>;

std::size_t feature_dim(const FeatureSpec& spec);
std::string describe(const FeatureSpec& spec);

// NodeLabelOneHot(max label + 1) when every graph carries node labels,
// DegreeOneHot(63) otherwise.
FeatureSpec default_feature_spec(const GraphSet& set);

// Populates node_features on every graph. Throws DataError for missing or
// out-of-range labels.
GraphSet attach_features(const GraphSet& set, const FeatureSpec& spec);

// Row i = default graph descriptor of graph i (dimension 64 + 10).
EmbeddingSet extract_statistics(const GraphSet& set, std::size_t workers = 1);

// Stacked ReLU message-passing encoder stored under enc0..enc{L-1}.
void init_encoder(ParamStore& store, std::size_t in_dim, std::size_t hidden_dim,
                  std::size_t num_layers, Rng& rng);

// Outputs of every encoder layer for one graph.
std::vector<DenseMatrix> encode(const ParamStore& store, std::size_t num_layers,
                                const Adjacency& adj, const DenseMatrix& x);

// Concatenated mean-pool of each layer output.
std::vector<double> layerwise_readout(const std::vector<DenseMatrix>& layers);

// Embeds every graph (features must be attached) with a frozen encoder.
EmbeddingSet embed_with_encoder(const ParamStore& store, std::size_t num_layers,
                                const GraphSet& set, std::string extractor,
                                std::string fingerprint,
                                std::size_t workers = 1);

ParamStore random_gnn_params(std::size_t in_dim, std::size_t hidden_dim,
                             std::size_t num_layers, std::uint64_t seed);

// Untrained encoder with seeded weights; embedding dimension
// num_layers * hidden_dim. Requires node features.
EmbeddingSet extract_random_gnn(const GraphSet& set, std::size_t hidden_dim,
                                std::size_t num_layers, std::uint64_t seed,
                                std::size_t workers = 1);

// Which reconstruction task a training step uses.
enum class MaskBranchPolicy {
  kCoin,      // fair coin per graph per epoch
  kNodeOnly,  // feature reconstruction only
  kEdgeOnly,  // edge reconstruction only (node branch when a graph has no edges)
};

struct GmaeConfig {
  std::size_t hidden_dim = 32;
  std::size_t num_layers = 2;
  double mask_rate = 0.2;
  std::size_t epochs = 30;
  double learning_rate = 1e-3;
  double sce_gamma = 2.0;
  std::uint64_t seed = 0;
  MaskBranchPolicy branch_policy = MaskBranchPolicy::kCoin;

  void validate() const;
  std::string fingerprint() const;
};

struct GmaeModel {
  GmaeConfig config;
  std::size_t in_dim = 0;
  ParamStore params;
  std::vector<double> epoch_losses;  // mean step loss per epoch
};

// Seeded initial parameters: encoder, zero mask token, feature decoder.
GmaeModel init_gmae(std::size_t in_dim, const GmaeConfig& cfg);

// Per-graph losses for one masked reconstruction step; gradients are added
// into model.params. Exposed for testing; train_gmae drives them.
double gmae_node_step(GmaeModel& model, const Graph& g, Rng& rng);
double gmae_edge_step(GmaeModel& model, const Graph& g, Rng& rng);

// Self-supervised training on the real set (features attached).
GmaeModel train_gmae(const GraphSet& real_set, const GmaeConfig& cfg);

// Unmasked encoder readout; dimension num_layers * hidden_dim.
EmbeddingSet extract_gmae(const GmaeModel& model, const GraphSet& set,
                          std::size_t workers = 1);

// JSON document: config, input dimension, parameters (name, shape,
// row-major values) and the epoch loss curve.
std::string save_gmae_json(const GmaeModel& model);
GmaeModel load_gmae_json(const std::string& text);

}  // namespace ggmeval
