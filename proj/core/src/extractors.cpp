#include "ggmeval/extractors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "ggmeval/graph_ops.hpp"
#include "json.hpp"

namespace ggmeval {

namespace {

std::string layer_name(std::size_t i) { return "enc" + std::to_string(i); }

constexpr const char* kDecoder = "decoder";
constexpr const char* kMaskToken = "mask_token";

const DenseMatrix& require_features(const Graph& g) {
  if (!g.node_features()) {
    throw ArgumentError("graph " + std::to_string(g.id()) +
                        " has no node features attached");
  }
  return *g.node_features();
}

std::size_t mask_count(double rate, std::size_t n) {
  const auto k = static_cast<std::size_t>(
      std::llround(rate * static_cast<double>(n)));
  return std::clamp<std::size_t>(k, 1, n);
}

// Backpropagates through the encoder given the gradient of the last layer
// output; returns the gradient with respect to the encoder input.
DenseMatrix encoder_backward(GmaeModel& model, const Adjacency& adj,
                             const DenseMatrix& input,
                             const std::vector<DenseMatrix>& outputs,
                             DenseMatrix grad) {
  const std::size_t layers = model.config.num_layers;
  for (std::size_t l = layers; l-- > 0;) {
    const DenseMatrix& layer_in = l == 0 ? input : outputs[l - 1];
    const auto layer = mp_layer(model.params, layer_name(l), Activation::kReLU);
    MpGradients g = mp_backward(layer, adj, layer_in, grad);
    accumulate_mp_grads(model.params, layer_name(l), g);
    grad = std::move(g.input);
  }
  return grad;
}

}  // namespace

std::size_t feature_dim(const FeatureSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NodeLabelOneHot>) {
          return s.num_classes;
        } else {
          return s.cap + 1;
        }
      },
      spec);
}

std::string describe(const FeatureSpec& spec) {
  if (auto* s = std::get_if<NodeLabelOneHot>(&spec)) {
    return "label-onehot(" + std::to_string(s->num_classes) + ")";
  }
  return "degree-onehot(" + std::to_string(std::get<DegreeOneHot>(spec).cap) +
         ")";
}

FeatureSpec default_feature_spec(const GraphSet& set) {
  bool all_labeled = !set.empty();
  int max_label = -1;
  for (const Graph& g : set.graphs) {
    if (!g.node_labels()) {
      all_labeled = false;
      break;
    }
    for (int l : *g.node_labels()) max_label = std::max(max_label, l);
  }
  if (all_labeled && max_label >= 0) {
    return NodeLabelOneHot{static_cast<std::size_t>(max_label) + 1};
  }
  return DegreeOneHot{63};
}

GraphSet attach_features(const GraphSet& set, const FeatureSpec& spec) {
  const std::size_t dim = feature_dim(spec);
  if (dim == 0) throw ArgumentError("attach_features: zero feature dimension");
  if (auto* d = std::get_if<DegreeOneHot>(&spec); d && d->cap < 1) {
    throw ArgumentError("attach_features: degree cap must be >= 1");
  }
  GraphSet out;
  out.provenance = set.provenance;
  out.graphs.reserve(set.size());
  for (const Graph& g : set.graphs) {
    DenseMatrix x(g.num_nodes(), dim);
    if (auto* s = std::get_if<NodeLabelOneHot>(&spec)) {
      if (!g.node_labels()) {
        throw DataError("graph " + std::to_string(g.id()) +
                        " has no node labels");
      }
      const auto& labels = *g.node_labels();
      for (std::size_t v = 0; v < labels.size(); ++v) {
        if (labels[v] < 0 || static_cast<std::size_t>(labels[v]) >= s->num_classes) {
          throw DataError("graph " + std::to_string(g.id()) + ": label " +
                          std::to_string(labels[v]) + " outside [0, " +
                          std::to_string(s->num_classes) + ")");
        }
        x(v, static_cast<std::size_t>(labels[v])) = 1.0;
      }
    } else {
      const std::size_t cap = std::get<DegreeOneHot>(spec).cap;
      const auto deg = g.degrees();
      for (std::size_t v = 0; v < deg.size(); ++v) x(v, std::min(deg[v], cap)) = 1.0;
    }
    out.graphs.push_back(g.with_features(std::move(x)));
  }
  return out;
}

EmbeddingSet extract_statistics(const GraphSet& set, std::size_t workers) {
  if (set.empty()) throw ArgumentError("extract_statistics: empty set");
  const DescriptorConfig cfg;
  EmbeddingSet out;
  out.extractor = "stats";
  out.fingerprint = "stats:degree_bins=" + std::to_string(cfg.degree_bins) +
                    ",cc_bins=" + std::to_string(cfg.cc_bins);
  out.data = DenseMatrix(set.size(), cfg.degree_bins + cfg.cc_bins);
  parallel_for(set.size(), workers, [&](std::size_t i) {
    auto d = graph_descriptor(set[i], cfg);
    std::copy(d.begin(), d.end(), out.data.row(i).begin());
  });
  return out;
}

void init_encoder(ParamStore& store, std::size_t in_dim, std::size_t hidden_dim,
                  std::size_t num_layers, Rng& rng) {
  if (num_layers < 1) throw ArgumentError("encoder needs at least one layer");
  if (in_dim < 1 || hidden_dim < 1) throw ArgumentError("encoder dimensions");
  for (std::size_t l = 0; l < num_layers; ++l) {
    add_mp_layer(store, layer_name(l), l == 0 ? in_dim : hidden_dim,
                 hidden_dim, rng);
  }
}

std::vector<DenseMatrix> encode(const ParamStore& store, std::size_t num_layers,
                                const Adjacency& adj, const DenseMatrix& x) {
  std::vector<DenseMatrix> outputs;
  outputs.reserve(num_layers);
  for (std::size_t l = 0; l < num_layers; ++l) {
    const auto layer = mp_layer(store, layer_name(l), Activation::kReLU);
    outputs.push_back(mp_forward(layer, adj, l == 0 ? x : outputs.back()));
  }
  return outputs;
}

std::vector<double> layerwise_readout(const std::vector<DenseMatrix>& layers) {
  std::vector<double> out;
  for (const DenseMatrix& h : layers) {
    auto pooled = mean_pool(h);
    out.insert(out.end(), pooled.begin(), pooled.end());
  }
  return out;
}

EmbeddingSet embed_with_encoder(const ParamStore& store, std::size_t num_layers,
                                const GraphSet& set, std::string extractor,
                                std::string fingerprint, std::size_t workers) {
  if (set.empty()) throw ArgumentError("embed: empty set");
  const std::size_t in_dim = store.at(layer_name(0) + ".w_self").value.rows();
  const std::size_t hidden =
      store.at(layer_name(num_layers - 1) + ".w_self").value.cols();
  for (const Graph& g : set.graphs) {
    if (require_features(g).cols() != in_dim) {
      throw ConfigError("feature dimension " +
                        std::to_string(g.node_features()->cols()) +
                        " does not match encoder input " +
                        std::to_string(in_dim));
    }
  }
  EmbeddingSet out;
  out.extractor = std::move(extractor);
  out.fingerprint = std::move(fingerprint);
  out.data = DenseMatrix(set.size(), num_layers * hidden);
  parallel_for(set.size(), workers, [&](std::size_t i) {
    const Graph& g = set[i];
    auto row = layerwise_readout(
        encode(store, num_layers, Adjacency::of(g), *g.node_features()));
    std::copy(row.begin(), row.end(), out.data.row(i).begin());
  });
  return out;
}

ParamStore random_gnn_params(std::size_t in_dim, std::size_t hidden_dim,
                             std::size_t num_layers, std::uint64_t seed) {
  ParamStore store;
  Rng rng(seed);
  init_encoder(store, in_dim, hidden_dim, num_layers, rng);
  return store;
}

EmbeddingSet extract_random_gnn(const GraphSet& set, std::size_t hidden_dim,
                                std::size_t num_layers, std::uint64_t seed,
                                std::size_t workers) {
  if (set.empty()) throw ArgumentError("extract_random_gnn: empty set");
  const std::size_t in_dim = require_features(set[0]).cols();
  ParamStore store = random_gnn_params(in_dim, hidden_dim, num_layers, seed);
  return embed_with_encoder(
      store, num_layers, set, "random-gnn",
      "random-gnn:h=" + std::to_string(hidden_dim) +
          ",l=" + std::to_string(num_layers) + ",seed=" + std::to_string(seed),
      workers);
}

void GmaeConfig::validate() const {
  if (!(mask_rate > 0.0 && mask_rate < 1.0)) {
    throw ConfigError("mask_rate must lie in (0, 1)");
  }
  if (num_layers < 1) throw ConfigError("num_layers must be >= 1");
  if (hidden_dim < 1) throw ConfigError("hidden_dim must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (!(sce_gamma >= 1.0)) throw ConfigError("sce_gamma must be >= 1");
}

std::string GmaeConfig::fingerprint() const {
  std::ostringstream ss;
  ss.precision(17);
  ss << "gmae:h=" << hidden_dim << ",l=" << num_layers
     << ",mask=" << mask_rate << ",epochs=" << epochs
     << ",lr=" << learning_rate << ",gamma=" << sce_gamma << ",seed=" << seed;
  return ss.str();
}

GmaeModel init_gmae(std::size_t in_dim, const GmaeConfig& cfg) {
  cfg.validate();
  GmaeModel model;
  model.config = cfg;
  model.in_dim = in_dim;
  Rng rng(derive_seed(cfg.seed, {0x1417}));
  init_encoder(model.params, in_dim, cfg.hidden_dim, cfg.num_layers, rng);
  model.params.add(kMaskToken, DenseMatrix(1, in_dim));
  add_mp_layer(model.params, kDecoder, cfg.hidden_dim, in_dim, rng);
  return model;
}

double gmae_node_step(GmaeModel& model, const Graph& g, Rng& rng) {
  const DenseMatrix& x = require_features(g);
  const std::size_t n = g.num_nodes();
  std::vector<std::size_t> masked =
      rng.sample_without_replacement(n, mask_count(model.config.mask_rate, n));
  std::sort(masked.begin(), masked.end());

  DenseMatrix input = x;
  const DenseMatrix& token = model.params.at(kMaskToken).value;
  for (std::size_t v : masked) {
    std::copy(token.row(0).begin(), token.row(0).end(), input.row(v).begin());
  }
  const Adjacency adj = Adjacency::of(g);
  const std::size_t layers = model.config.num_layers;
  std::vector<DenseMatrix> outputs = encode(model.params, layers, adj, input);

  const auto decoder = mp_layer(model.params, kDecoder, Activation::kIdentity);
  const DenseMatrix recon = mp_forward(decoder, adj, outputs.back());
  MatrixLoss loss = sce_loss(recon.gather_rows(masked), x.gather_rows(masked),
                             model.config.sce_gamma);

  DenseMatrix recon_grad(recon.rows(), recon.cols());
  for (std::size_t i = 0; i < masked.size(); ++i) {
    auto src = loss.grad.row(i);
    std::copy(src.begin(), src.end(), recon_grad.row(masked[i]).begin());
  }
  MpGradients dec_grads = mp_backward(decoder, adj, outputs.back(), recon_grad);
  accumulate_mp_grads(model.params, kDecoder, dec_grads);
  DenseMatrix input_grad =
      encoder_backward(model, adj, input, outputs, std::move(dec_grads.input));
  DenseMatrix& token_grad = model.params.at(kMaskToken).grad;
  for (std::size_t v : masked) {
    for (std::size_t c = 0; c < token_grad.cols(); ++c) {
      token_grad(0, c) += input_grad(v, c);
    }
  }
  return loss.loss;
}

double gmae_edge_step(GmaeModel& model, const Graph& g, Rng& rng) {
  const DenseMatrix& x = require_features(g);
  const std::size_t m = g.num_edges();
  if (m == 0) return gmae_node_step(model, g, rng);
  const std::size_t n = g.num_nodes();
  const std::size_t n_mask = mask_count(model.config.mask_rate, m);
  std::vector<std::size_t> masked = rng.sample_without_replacement(m, n_mask);
  std::sort(masked.begin(), masked.end());

  std::vector<bool> is_masked(m, false);
  for (std::size_t i : masked) is_masked[i] = true;
  std::vector<Edge> visible;
  visible.reserve(m - n_mask);
  for (std::size_t i = 0; i < m; ++i) {
    if (!is_masked[i]) visible.push_back(g.edges()[i]);
  }

  // Positive pairs are the masked edges; negatives are sampled non-edges.
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::vector<double> labels;
  for (std::size_t i : masked) {
    pairs.emplace_back(g.edges()[i].u, g.edges()[i].v);
    labels.push_back(1.0);
  }
  std::unordered_set<std::uint64_t> present;
  for (const Edge& e : g.edges()) present.insert(edge_key(e.u, e.v));
  const std::size_t max_pairs = n * (n - 1) / 2;
  if (max_pairs > m) {
    std::size_t found = 0;
    const std::size_t max_draws = 20 * n_mask + 100;
    for (std::size_t draw = 0; draw < max_draws && found < n_mask; ++draw) {
      const auto a = static_cast<NodeId>(rng.uniform_index(n));
      const auto b = static_cast<NodeId>(rng.uniform_index(n));
      if (a == b || present.contains(edge_key(a, b))) continue;
      pairs.emplace_back(a, b);
      labels.push_back(0.0);
      ++found;
    }
  }

  const Adjacency adj(n, visible);
  std::vector<DenseMatrix> outputs =
      encode(model.params, model.config.num_layers, adj, x);
  const DenseMatrix& z = outputs.back();
  std::vector<double> scores;
  scores.reserve(pairs.size());
  for (auto [a, b] : pairs) scores.push_back(dot(z.row(a), z.row(b)));
  VectorLoss loss = bce_logit_loss(scores, labels);

  DenseMatrix z_grad(z.rows(), z.cols());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [a, b] = pairs[i];
    const double gi = loss.grad[i];
    for (std::size_t c = 0; c < z.cols(); ++c) {
      z_grad(a, c) += gi * z(b, c);
      z_grad(b, c) += gi * z(a, c);
    }
  }
  encoder_backward(model, adj, x, outputs, std::move(z_grad));
  return loss.loss;
}

GmaeModel train_gmae(const GraphSet& real_set, const GmaeConfig& cfg) {
  if (real_set.empty()) throw ArgumentError("train_gmae: empty set");
  const std::size_t in_dim = require_features(real_set[0]).cols();
  GmaeModel model = init_gmae(in_dim, cfg);
  Rng rng(derive_seed(cfg.seed, {0x7261}));
  const AdamConfig adam{cfg.learning_rate, 0.9, 0.999, 1e-8};
  std::vector<std::size_t> order(real_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0.0;
    for (std::size_t idx : order) {
      const Graph& g = real_set[idx];
      if (require_features(g).cols() != in_dim) {
        throw ConfigError("train_gmae: inconsistent feature dimension");
      }
      bool node_branch = false;
      switch (cfg.branch_policy) {
        case MaskBranchPolicy::kCoin:
          node_branch = rng.coin();
          break;
        case MaskBranchPolicy::kNodeOnly:
          node_branch = true;
          break;
        case MaskBranchPolicy::kEdgeOnly:
          node_branch = false;
          break;
      }
      if (g.num_edges() == 0) node_branch = true;
      total += node_branch ? gmae_node_step(model, g, rng)
                           : gmae_edge_step(model, g, rng);
      adam_step(model.params, adam, ++step);
    }
    model.epoch_losses.push_back(total / static_cast<double>(order.size()));
  }
  return model;
}

EmbeddingSet extract_gmae(const GmaeModel& model, const GraphSet& set,
                          std::size_t workers) {
  if (!set.empty() && require_features(set[0]).cols() != model.in_dim) {
    throw ConfigError("extract_gmae: features have " +
                      std::to_string(set[0].node_features()->cols()) +
                      " columns, model expects " + std::to_string(model.in_dim));
  }
  return embed_with_encoder(model.params, model.config.num_layers, set, "gmae",
                            model.config.fingerprint(), workers);
}

std::string save_gmae_json(const GmaeModel& model) {
  using nlohmann::json;
  json doc;
  const GmaeConfig& c = model.config;
  doc["format"] = "ggmeval-gmae";
  doc["version"] = 1;
  doc["config"] = {{"hidden_dim", c.hidden_dim},   {"num_layers", c.num_layers},
                   {"mask_rate", c.mask_rate},     {"epochs", c.epochs},
                   {"learning_rate", c.learning_rate},
                   {"sce_gamma", c.sce_gamma},     {"seed", c.seed}};
  doc["in_dim"] = model.in_dim;
  doc["epoch_losses"] = model.epoch_losses;
  json params = json::array();
  for (const Parameter& p : model.params.params()) {
    params.push_back({{"name", p.name},
                      {"rows", p.value.rows()},
                      {"cols", p.value.cols()},
                      {"values", p.value.data()}});
  }
  doc["params"] = std::move(params);
  return doc.dump(1);
}

GmaeModel load_gmae_json(const std::string& text) {
  using nlohmann::json;
  try {
    const json doc = json::parse(text);
    if (doc.at("format") != "ggmeval-gmae" || doc.at("version") != 1) {
      throw ConfigError("not a ggmeval GMAE parameter document");
    }
    GmaeConfig cfg;
    const json& c = doc.at("config");
    cfg.hidden_dim = c.at("hidden_dim");
    cfg.num_layers = c.at("num_layers");
    cfg.mask_rate = c.at("mask_rate");
    cfg.epochs = c.at("epochs");
    cfg.learning_rate = c.at("learning_rate");
    cfg.sce_gamma = c.at("sce_gamma");
    cfg.seed = c.at("seed");
    GmaeModel model = init_gmae(doc.at("in_dim"), cfg);
    model.epoch_losses = doc.at("epoch_losses").get<std::vector<double>>();
    for (const json& p : doc.at("params")) {
      Parameter& target = model.params.at(p.at("name").get<std::string>());
      DenseMatrix value(p.at("rows"), p.at("cols"),
                        p.at("values").get<std::vector<double>>());
      if (value.rows() != target.value.rows() ||
          value.cols() != target.value.cols()) {
        throw ConfigError("parameter " + target.name + " has wrong shape");
      }
      target.value = std::move(value);
    }
    return model;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed GMAE document: ") + e.what());
  }
}

}  // namespace ggmeval
