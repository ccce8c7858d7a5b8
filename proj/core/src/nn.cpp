#include "ggmeval/nn.hpp"

#include <algorithm>
#include <cmath>

namespace ggmeval {

Adjacency::Adjacency(std::size_t num_nodes, std::span<const Edge> edges)
    : offsets_(num_nodes + 1, 0) {
  for (const Edge& e : edges) {
    if (e.u >= num_nodes || e.v >= num_nodes) {
      throw ShapeError("Adjacency: edge index out of range");
    }
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t v = 0; v < num_nodes; ++v) offsets_[v + 1] += offsets_[v];
  targets_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges) {
    targets_[fill[e.u]++] = e.v;
    targets_[fill[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < num_nodes; ++v) {
    std::sort(targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
  }
}

DenseMatrix Adjacency::aggregate(const DenseMatrix& h) const {
  if (h.rows() != num_nodes()) {
    throw ShapeError("aggregate: rows != num_nodes");
  }
  DenseMatrix out(h.rows(), h.cols());
  for (std::size_t v = 0; v < num_nodes(); ++v) {
    auto dst = out.row(v);
    for (NodeId u : neighbors(v)) {
      auto src = h.row(u);
      for (std::size_t c = 0; c < h.cols(); ++c) dst[c] += src[c];
    }
  }
  return out;
}

Parameter& ParamStore::add(std::string name, DenseMatrix init) {
  if (contains(name)) throw ArgumentError("duplicate parameter " + name);
  Parameter p;
  p.name = std::move(name);
  p.grad = DenseMatrix(init.rows(), init.cols());
  p.first_moment = DenseMatrix(init.rows(), init.cols());
  p.second_moment = DenseMatrix(init.rows(), init.cols());
  p.value = std::move(init);
  params_.push_back(std::move(p));
  return params_.back();
}

bool ParamStore::contains(std::string_view name) const {
  return std::any_of(params_.begin(), params_.end(),
                     [&](const Parameter& p) { return p.name == name; });
}

Parameter& ParamStore::at(std::string_view name) {
  for (Parameter& p : params_) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown parameter " + std::string(name));
}

const Parameter& ParamStore::at(std::string_view name) const {
  return const_cast<ParamStore*>(this)->at(name);
}

void ParamStore::zero_grad() {
  for (Parameter& p : params_) p.grad.set_zero();
}

bool ParamStore::same_values(const ParamStore& other) const {
  if (params_.size() != other.params_.size()) return false;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name != other.params_[i].name ||
        !(params_[i].value == other.params_[i].value)) {
      return false;
    }
  }
  return true;
}

void add_mp_layer(ParamStore& store, const std::string& prefix,
                  std::size_t d_in, std::size_t d_out, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(d_in));
  auto init = [&] {
    DenseMatrix w(d_in, d_out);
    for (double& x : w.data()) x = rng.uniform_real(-bound, bound);
    return w;
  };
  store.add(prefix + ".w_neigh", init());
  store.add(prefix + ".w_self", init());
  store.add(prefix + ".bias", DenseMatrix(1, d_out));
}

MessagePassingLayer mp_layer(const ParamStore& store,
                             const std::string& prefix,
                             Activation activation) {
  return {store.at(prefix + ".w_neigh").value,
          store.at(prefix + ".w_self").value, store.at(prefix + ".bias").value,
          activation};
}

namespace {

void check_layer_shapes(const MessagePassingLayer& layer, const Adjacency& adj,
                        const DenseMatrix& h) {
  if (layer.w_neigh.rows() != layer.w_self.rows() ||
      layer.w_neigh.cols() != layer.w_self.cols() ||
      layer.bias.rows() != 1 || layer.bias.cols() != layer.w_self.cols()) {
    throw ShapeError("message-passing layer: inconsistent weight shapes");
  }
  if (h.cols() != layer.in_dim()) {
    throw ShapeError("message-passing layer: input has " +
                     std::to_string(h.cols()) + " columns, layer expects " +
                     std::to_string(layer.in_dim()));
  }
  if (h.rows() != adj.num_nodes()) {
    throw ShapeError("message-passing layer: input rows != num_nodes");
  }
}

DenseMatrix pre_activation(const MessagePassingLayer& layer,
                           const Adjacency& adj, const DenseMatrix& h) {
  DenseMatrix z = matmul(adj.aggregate(h), layer.w_neigh);
  z += matmul(h, layer.w_self);
  for (std::size_t r = 0; r < z.rows(); ++r) {
    auto row = z.row(r);
    for (std::size_t c = 0; c < z.cols(); ++c) row[c] += layer.bias(0, c);
  }
  return z;
}

}  // namespace

DenseMatrix mp_forward(const MessagePassingLayer& layer, const Adjacency& adj,
                       const DenseMatrix& h) {
  check_layer_shapes(layer, adj, h);
  DenseMatrix z = pre_activation(layer, adj, h);
  if (layer.activation == Activation::kReLU) {
    for (double& x : z.data()) x = std::max(x, 0.0);
  }
  return z;
}

MpGradients mp_backward(const MessagePassingLayer& layer, const Adjacency& adj,
                        const DenseMatrix& h, const DenseMatrix& upstream) {
  check_layer_shapes(layer, adj, h);
  if (upstream.rows() != h.rows() || upstream.cols() != layer.out_dim()) {
    throw ShapeError("mp_backward: upstream gradient shape");
  }
  DenseMatrix g = upstream;
  if (layer.activation == Activation::kReLU) {
    const DenseMatrix z = pre_activation(layer, adj, h);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!(z.data()[i] > 0.0)) g.data()[i] = 0.0;
    }
  }
  MpGradients out;
  out.w_neigh = matmul_tn(adj.aggregate(h), g);
  out.w_self = matmul_tn(h, g);
  out.bias = DenseMatrix(1, g.cols());
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < g.cols(); ++c) out.bias(0, c) += g(r, c);
  }
  // The adjacency is symmetric, so the transpose aggregation is aggregate().
  out.input = adj.aggregate(matmul_nt(g, layer.w_neigh));
  out.input += matmul_nt(g, layer.w_self);
  return out;
}

void accumulate_mp_grads(ParamStore& store, const std::string& prefix,
                         const MpGradients& grads) {
  store.at(prefix + ".w_neigh").grad += grads.w_neigh;
  store.at(prefix + ".w_self").grad += grads.w_self;
  store.at(prefix + ".bias").grad += grads.bias;
}

std::vector<double> mean_pool(const DenseMatrix& h) {
  if (h.rows() == 0) throw ArgumentError("mean_pool: no rows");
  std::vector<double> out(h.cols(), 0.0);
  for (std::size_t r = 0; r < h.rows(); ++r) {
    auto row = h.row(r);
    for (std::size_t c = 0; c < h.cols(); ++c) out[c] += row[c];
  }
  for (double& x : out) x /= static_cast<double>(h.rows());
  return out;
}

MatrixLoss sce_loss(const DenseMatrix& pred, const DenseMatrix& target,
                    double gamma) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
    throw ShapeError("sce_loss: shape mismatch");
  }
  if (pred.rows() == 0) throw ArgumentError("sce_loss: no rows");
  const double m = static_cast<double>(pred.rows());
  MatrixLoss out{0.0, DenseMatrix(pred.rows(), pred.cols())};
  for (std::size_t r = 0; r < pred.rows(); ++r) {
    auto p = pred.row(r);
    auto t = target.row(r);
    const double pn = std::sqrt(dot(p, p));
    const double tn = std::sqrt(dot(t, t));
    if (pn == 0.0 || tn == 0.0) {
      out.loss += 1.0;
      continue;
    }
    const double cos = dot(p, t) / (pn * tn);
    const double one_minus = 1.0 - cos;
    out.loss += std::pow(one_minus, gamma);
    // d/dp of (1 - cos)^gamma = -gamma (1 - cos)^(gamma-1) dcos/dp, with
    // dcos/dp = t / (|p||t|) - cos * p / |p|^2.
    const double outer =
        one_minus > 0.0 ? -gamma * std::pow(one_minus, gamma - 1.0) / m : 0.0;
    auto g = out.grad.row(r);
    for (std::size_t c = 0; c < p.size(); ++c) {
      g[c] = outer * (t[c] / (pn * tn) - cos * p[c] / (pn * pn));
    }
  }
  out.loss /= m;
  return out;
}

VectorLoss bce_logit_loss(std::span<const double> scores,
                          std::span<const double> labels) {
  if (scores.size() != labels.size()) {
    throw ShapeError("bce_logit_loss: length mismatch");
  }
  VectorLoss out{0.0, std::vector<double>(scores.size(), 0.0)};
  if (scores.empty()) return out;
  const double n = static_cast<double>(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    const double y = labels[i];
    out.loss += std::max(s, 0.0) - s * y + std::log1p(std::exp(-std::abs(s)));
    const double sigmoid =
        s >= 0.0 ? 1.0 / (1.0 + std::exp(-s)) : std::exp(s) / (1.0 + std::exp(s));
    out.grad[i] = (sigmoid - y) / n;
  }
  out.loss /= n;
  return out;
}

void adam_step(ParamStore& store, const AdamConfig& cfg,
               std::size_t step_index) {
  if (step_index < 1) throw ArgumentError("adam_step: step_index starts at 1");
  const double t = static_cast<double>(step_index);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (Parameter& p : store.params()) {
    auto& w = p.value.data();
    auto& g = p.grad.data();
    auto& m = p.first_moment.data();
    auto& v = p.second_moment.data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      w[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.eps);
      g[i] = 0.0;
    }
  }
}

}  // namespace ggmeval
