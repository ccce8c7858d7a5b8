#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ggmeval/common.hpp"
#include "ggmeval/graph.hpp"
#include "ggmeval/matrix.hpp"

namespace ggmeval {

enum class Activation { kReLU, kIdentity };

// Symmetric neighbor structure in CSR form. Neighbor lists are sorted so
// aggregation sums in a fixed order.
class Adjacency {
 public:
  Adjacency(std::size_t num_nodes, std::span<const Edge> edges);
  static Adjacency of(const Graph& g) {
    return Adjacency(g.num_nodes(), g.edges());
  }

  std::size_t num_nodes() const { return offsets_.size() - 1; }
  std::span<const NodeId> neighbors(std::size_t v) const {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  // Row v of the result is the sum of rows h[u] over neighbors u of v.
  DenseMatrix aggregate(const DenseMatrix& h) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
};

struct Parameter {
  std::string name;
  DenseMatrix value;
  DenseMatrix grad;
  DenseMatrix first_moment;
  DenseMatrix second_moment;
};

// Named parameters with gradient and Adam moment buffers of matching shape.
// References returned by add()/at() stay valid as more parameters are added.
class ParamStore {
 public:
  Parameter& add(std::string name, DenseMatrix init);

  bool contains(std::string_view name) const;
  Parameter& at(std::string_view name);
  const Parameter& at(std::string_view name) const;

  std::deque<Parameter>& params() { return params_; }
  const std::deque<Parameter>& params() const { return params_; }
  std::size_t size() const { return params_.size(); }

  void zero_grad();

  // Parameter values only (names, shapes, entries).
  bool same_values(const ParamStore& other) const;

 private:
  std::deque<Parameter> params_;
};

// Non-owning view of one sum-aggregation message-passing layer:
//   out = act(A_sum * h * w_neigh + h * w_self + bias)
struct MessagePassingLayer {
  const DenseMatrix& w_neigh;  // d_in x d_out
  const DenseMatrix& w_self;   // d_in x d_out
  const DenseMatrix& bias;     // 1 x d_out
  Activation activation;

  std::size_t in_dim() const { return w_self.rows(); }
  std::size_t out_dim() const { return w_self.cols(); }
};

// Registers <prefix>.w_neigh, <prefix>.w_self (uniform in +-1/sqrt(d_in))
// and a zero <prefix>.bias.
void add_mp_layer(ParamStore& store, const std::string& prefix,
                  std::size_t d_in, std::size_t d_out, Rng& rng);
MessagePassingLayer mp_layer(const ParamStore& store,
                             const std::string& prefix, Activation activation);

DenseMatrix mp_forward(const MessagePassingLayer& layer, const Adjacency& adj,
                       const DenseMatrix& h);

struct MpGradients {
  DenseMatrix w_neigh;
  DenseMatrix w_self;
  DenseMatrix bias;
  DenseMatrix input;
};

MpGradients mp_backward(const MessagePassingLayer& layer, const Adjacency& adj,
                        const DenseMatrix& h, const DenseMatrix& upstream);

// Adds layer gradients into the store's gradient buffers.
void accumulate_mp_grads(ParamStore& store, const std::string& prefix,
                         const MpGradients& grads);

// Column means. Throws ArgumentError for zero rows.
std::vector<double> mean_pool(const DenseMatrix& h);

struct MatrixLoss {
  double loss = 0.0;
  DenseMatrix grad;
};

struct VectorLoss {
  double loss = 0.0;
  std::vector<double> grad;
};

// Scaled cosine error: mean over rows of (1 - cos(pred, target))^gamma.
// Rows where either side has zero norm contribute 1 and zero gradient.
MatrixLoss sce_loss(const DenseMatrix& pred, const DenseMatrix& target,
                    double gamma);

// Mean logistic binary cross-entropy over scores (logits).
VectorLoss bce_logit_loss(std::span<const double> scores,
                          std::span<const double> labels);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// One bias-corrected Adam update; step_index counts from 1. Gradients are
// zeroed afterwards.
void adam_step(ParamStore& store, const AdamConfig& cfg,
               std::size_t step_index);

}  // namespace ggmeval
