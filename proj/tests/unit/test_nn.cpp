#include <gtest/gtest.h>

#include <cmath>

#include "ggmeval/nn.hpp"
#include "test_support.hpp"

using namespace ggmeval;
using ggmeval::testing::numeric_gradient;
using ggmeval::testing::random_graph;
using ggmeval::testing::random_matrix;
using ggmeval::testing::relative_error;

namespace {

struct LayerFixture {
  DenseMatrix w_neigh, w_self, bias;
  MessagePassingLayer layer(Activation act) const { return {w_neigh, w_self, bias, act}; }
};

// Scalar objective sum(upstream .* layer(h)).
double objective(const MessagePassingLayer& layer, const Adjacency& adj,
                 const DenseMatrix& h, const DenseMatrix& upstream) {
  DenseMatrix out = mp_forward(layer, adj, h);
  double s = 0;
  for (std::size_t i = 0; i < out.size(); ++i) s += out.data()[i] * upstream.data()[i];
  return s;
}

}  // namespace

TEST(Adjacency, SortedSymmetricNeighbors) {
  Graph g(1, 4, {{2, 0}, {0, 1}, {3, 0}});
  Adjacency adj = Adjacency::of(g);
  auto n0 = adj.neighbors(0);
  EXPECT_EQ(std::vector<NodeId>(n0.begin(), n0.end()), (std::vector<NodeId>{1, 2, 3}));
  EXPECT_EQ(adj.neighbors(3).size(), 1u);
  DenseMatrix h = DenseMatrix::from_rows({{1}, {2}, {4}, {8}});
  DenseMatrix agg = adj.aggregate(h);
  EXPECT_EQ(agg(0, 0), 14.0);
  EXPECT_EQ(agg(1, 0), 1.0);
}

TEST(MpForward, ZeroWeightsReluGivesZero) {
  LayerFixture f{DenseMatrix(3, 2), DenseMatrix(3, 2), DenseMatrix(1, 2)};
  Rng rng(1);
  Graph g = random_graph(5, 0.5, rng);
  DenseMatrix out = mp_forward(f.layer(Activation::kReLU), Adjacency::of(g), random_matrix(5, 3, rng));
  for (double v : out.data()) EXPECT_EQ(v, 0.0);
}

TEST(MpForward, IsolatedNodeIsAffine) {
  LayerFixture f{DenseMatrix::from_rows({{5, 6}}), DenseMatrix::from_rows({{2, -1}}),
                 DenseMatrix::from_rows({{0.5, 0.25}})};
  Graph g(1, 1, {});
  DenseMatrix out = mp_forward(f.layer(Activation::kIdentity), Adjacency::of(g),
                               DenseMatrix::from_rows({{3}}));
  EXPECT_EQ(out, DenseMatrix::from_rows({{6.5, -2.75}}));
}

TEST(MpForward, TwoNodeHandCase) {
  LayerFixture f{DenseMatrix::from_rows({{2}}), DenseMatrix::from_rows({{3}}), DenseMatrix(1, 1)};
  Graph g(1, 2, {{0, 1}});
  DenseMatrix out = mp_forward(f.layer(Activation::kIdentity), Adjacency::of(g),
                               DenseMatrix::from_rows({{1}, {5}}));
  EXPECT_EQ(out, DenseMatrix::from_rows({{13}, {17}}));
}

TEST(MpBackward, ZeroUpstreamGivesZeroGradients) {
  Rng rng(2);
  LayerFixture f{random_matrix(3, 4, rng), random_matrix(3, 4, rng), random_matrix(1, 4, rng)};
  Graph g = random_graph(6, 0.4, rng);
  auto grads = mp_backward(f.layer(Activation::kReLU), Adjacency::of(g), random_matrix(6, 3, rng),
                           DenseMatrix(6, 4));
  for (const DenseMatrix* m : {&grads.w_neigh, &grads.w_self, &grads.bias, &grads.input}) {
    for (double v : m->data()) EXPECT_EQ(v, 0.0);
  }
}

// out_0 = w_n h_1 + w_s h_0, out_1 = w_n h_0 + w_s h_1 with upstream (1, 1):
// d/dw_n = h_1 + h_0 = 6, d/dw_s = 6, d/db = 2, d/dh = (w_n + w_s) = 5 each.
TEST(MpBackward, TwoNodeHandDerivative) {
  LayerFixture f{DenseMatrix::from_rows({{2}}), DenseMatrix::from_rows({{3}}), DenseMatrix(1, 1)};
  Graph g(1, 2, {{0, 1}});
  auto grads = mp_backward(f.layer(Activation::kIdentity), Adjacency::of(g),
                           DenseMatrix::from_rows({{1}, {5}}), DenseMatrix(2, 1, 1.0));
  EXPECT_EQ(grads.w_neigh(0, 0), 6.0);
  EXPECT_EQ(grads.w_self(0, 0), 6.0);
  EXPECT_EQ(grads.bias(0, 0), 2.0);
  EXPECT_EQ(grads.input, DenseMatrix(2, 1, 5.0));
}

TEST(MpBackward, MatchesFiniteDifferences) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(6);
    const std::size_t din = 1 + rng.uniform_index(4);
    const std::size_t dout = 1 + rng.uniform_index(4);
    Graph g = random_graph(n, 0.5, rng);
    Adjacency adj = Adjacency::of(g);
    LayerFixture f{random_matrix(din, dout, rng), random_matrix(din, dout, rng),
                   random_matrix(1, dout, rng)};
    DenseMatrix h = random_matrix(n, din, rng);
    DenseMatrix up = random_matrix(n, dout, rng);
    const Activation act = Activation::kIdentity;
    auto grads = mp_backward(f.layer(act), adj, h, up);
    auto f_obj = [&] { return objective(f.layer(act), adj, h, up); };
    EXPECT_LT(relative_error(grads.w_neigh.data(), numeric_gradient(f.w_neigh.data(), f_obj)), 1e-6);
    EXPECT_LT(relative_error(grads.w_self.data(), numeric_gradient(f.w_self.data(), f_obj)), 1e-6);
    EXPECT_LT(relative_error(grads.bias.data(), numeric_gradient(f.bias.data(), f_obj)), 1e-6);
    EXPECT_LT(relative_error(grads.input.data(), numeric_gradient(h.data(), f_obj)), 1e-6);
  }
}

TEST(ParamStore, AddLookupAndZeroGrad) {
  ParamStore store;
  Parameter& p = store.add("a", DenseMatrix(2, 2, 1.0));
  store.add("b", DenseMatrix(1, 3));
  EXPECT_EQ(&store.at("a"), &p);
  EXPECT_TRUE(store.contains("b"));
  EXPECT_FALSE(store.contains("c"));
  EXPECT_EQ(p.grad.rows(), 2u);
  p.grad(0, 0) = 4.0;
  store.zero_grad();
  EXPECT_EQ(p.grad(0, 0), 0.0);
  EXPECT_THROW(store.at("c"), ConfigError);
}

TEST(MeanPool, Cases) {
  EXPECT_EQ(mean_pool(DenseMatrix::from_rows({{3, 4}})), (std::vector<double>{3, 4}));
  EXPECT_EQ(mean_pool(DenseMatrix::from_rows({{0, 2}, {2, 0}})), (std::vector<double>{1, 1}));
  EXPECT_THROW(mean_pool(DenseMatrix(0, 2)), ArgumentError);
}

TEST(MeanPool, RowPermutationInvariant) {
  Rng rng(4);
  DenseMatrix h = random_matrix(7, 3, rng);
  std::vector<std::size_t> idx{6, 2, 0, 5, 1, 4, 3};
  auto a = mean_pool(h);
  auto b = mean_pool(h.gather_rows(idx));
  for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(a[c], b[c], 1e-15);
}

TEST(SceLoss, HandCases) {
  DenseMatrix t = DenseMatrix::from_rows({{1, 2}, {-3, 0.5}});
  EXPECT_NEAR(sce_loss(t, t, 2.0).loss, 0.0, 1e-15);
  DenseMatrix neg = t;
  for (double& v : neg.data()) v = -v;
  EXPECT_NEAR(sce_loss(neg, t, 1.0).loss, 2.0, 1e-15);
}

TEST(SceLoss, ZeroRowsContributeOne) {
  DenseMatrix pred = DenseMatrix::from_rows({{0, 0}, {1, 0}});
  DenseMatrix target = DenseMatrix::from_rows({{1, 1}, {1, 0}});
  auto r = sce_loss(pred, target, 2.0);
  EXPECT_NEAR(r.loss, 0.5, 1e-15);
  EXPECT_EQ(r.grad(0, 0), 0.0);
}

TEST(SceLoss, MatchesFiniteDifferences) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + rng.uniform_index(5);
    const std::size_t f = 1 + rng.uniform_index(5);
    DenseMatrix pred = random_matrix(m, f, rng);
    DenseMatrix target = random_matrix(m, f, rng);
    const double gamma = 1.0 + rng.uniform_index(3);
    auto r = sce_loss(pred, target, gamma);
    auto num = numeric_gradient(pred.data(), [&] { return sce_loss(pred, target, gamma).loss; });
    EXPECT_LT(relative_error(r.grad.data(), num), 1e-6);
  }
}

TEST(BceLoss, HandCases) {
  std::vector<double> s{0.0};
  std::vector<double> y{1.0};
  EXPECT_NEAR(bce_logit_loss(s, y).loss, std::log(2.0), 1e-15);
  s = {40.0};
  auto r = bce_logit_loss(s, y);
  EXPECT_TRUE(std::isfinite(r.loss));
  EXPECT_LT(r.loss, 1e-15);
  s = {-800.0};
  r = bce_logit_loss(s, y);
  EXPECT_NEAR(r.loss, 800.0, 1e-9);
  EXPECT_NEAR(r.grad[0], -1.0, 1e-15);
}

TEST(BceLoss, MatchesFiniteDifferences) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(10);
    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = rng.uniform_real(-4, 4);
      y[i] = rng.coin() ? 1.0 : 0.0;
    }
    auto r = bce_logit_loss(s, y);
    auto num = numeric_gradient(s, [&] { return bce_logit_loss(s, y).loss; });
    EXPECT_LT(relative_error(r.grad, num), 1e-6);
  }
}

TEST(Adam, ZeroGradientLeavesParameters) {
  ParamStore store;
  store.add("w", DenseMatrix::from_rows({{1, -2}}));
  ParamStore before = store;
  adam_step(store, AdamConfig{}, 1);
  EXPECT_TRUE(store.same_values(before));
}

TEST(Adam, FirstStepHasLearningRateMagnitude) {
  ParamStore store;
  store.add("w", DenseMatrix(1, 1, 0.0));
  AdamConfig cfg;
  cfg.learning_rate = 0.1;
  store.at("w").grad(0, 0) = 1.0;
  adam_step(store, cfg, 1);
  EXPECT_NEAR(store.at("w").value(0, 0), -0.1, 1e-8);
  EXPECT_EQ(store.at("w").grad(0, 0), 0.0);
  store.at("w").grad(0, 0) = 1.0;
  adam_step(store, cfg, 2);
  EXPECT_NEAR(store.at("w").value(0, 0), -0.2, 1e-7);
}

TEST(Adam, DeterministicTrajectories) {
  auto run = [] {
    ParamStore store;
    Rng rng(7);
    add_mp_layer(store, "l", 3, 2, rng);
    for (std::size_t step = 1; step <= 5; ++step) {
      for (Parameter& p : store.params())
        for (double& g : p.grad.data()) g = rng.uniform_real(-1, 1);
      adam_step(store, AdamConfig{}, step);
    }
    return store;
  };
  EXPECT_TRUE(run().same_values(run()));
}

TEST(AddMpLayer, InitRangeAndZeroBias) {
  ParamStore store;
  Rng rng(8);
  add_mp_layer(store, "enc0", 16, 4, rng);
  const double bound = 1.0 / std::sqrt(16.0);
  for (const char* name : {"enc0.w_neigh", "enc0.w_self"}) {
    for (double v : store.at(name).value.data()) {
      EXPECT_LE(std::abs(v), bound);
    }
  }
  for (double v : store.at("enc0.bias").value.data()) EXPECT_EQ(v, 0.0);
  auto layer = mp_layer(store, "enc0", Activation::kReLU);
  EXPECT_EQ(layer.in_dim(), 16u);
  EXPECT_EQ(layer.out_dim(), 4u);
}
