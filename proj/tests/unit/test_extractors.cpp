#include <gtest/gtest.h>

#include <cmath>

#include "ggmeval/extractors.hpp"
#include "ggmeval/graph_ops.hpp"
#include "test_support.hpp"

using namespace ggmeval;
using ggmeval::testing::numeric_gradient;
using ggmeval::testing::permute_nodes;
using ggmeval::testing::random_graph;
using ggmeval::testing::random_graph_set;
using ggmeval::testing::random_permutation;
using ggmeval::testing::relative_error;

namespace {

GraphSet with_degree_features(const GraphSet& set) {
  return attach_features(set, DegreeOneHot{});
}

GraphSet small_corpus(std::uint64_t seed, std::size_t count = 12) {
  Rng rng(seed);
  return with_degree_features(random_graph_set(count, 3, 12, 0.3, rng));
}

}  // namespace

TEST(Features, DegreeOneHotOnTriangle) {
  GraphSet set;
  set.graphs.emplace_back(1, 3, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}});
  GraphSet out = attach_features(set, DegreeOneHot{4});
  const DenseMatrix& x = *out[0].node_features();
  ASSERT_EQ(x.cols(), 5u);
  for (std::size_t v = 0; v < 3; ++v) {
    for (std::size_t c = 0; c < 5; ++c) EXPECT_EQ(x(v, c), c == 2 ? 1.0 : 0.0);
  }
}

TEST(Features, DegreeCapClips) {
  std::vector<Edge> star;
  for (NodeId v = 1; v <= 100; ++v) star.push_back({0, v});
  GraphSet set;
  set.graphs.emplace_back(1, 101, star);
  const DenseMatrix& x = *attach_features(set, DegreeOneHot{})[0].node_features();
  EXPECT_EQ(x.cols(), 64u);
  EXPECT_EQ(x(0, 63), 1.0);
  EXPECT_EQ(x(1, 1), 1.0);
}

TEST(Features, NodeLabelOneHot) {
  GraphSet set;
  set.graphs.emplace_back(1, 2, std::vector<Edge>{{0, 1}}, std::nullopt, std::vector<int>{0, 1});
  set.graphs.emplace_back(2, 1, std::vector<Edge>{}, std::nullopt, std::vector<int>{1});
  FeatureSpec spec = default_feature_spec(set);
  ASSERT_TRUE(std::holds_alternative<NodeLabelOneHot>(spec));
  EXPECT_EQ(feature_dim(spec), 2u);
  GraphSet out = attach_features(set, spec);
  EXPECT_EQ(*out[0].node_features(), DenseMatrix::from_rows({{1, 0}, {0, 1}}));
  EXPECT_THROW(attach_features(set, NodeLabelOneHot{1}), DataError);
}

TEST(Features, DefaultIsDegreeWithoutLabels) {
  Rng rng(1);
  GraphSet set = random_graph_set(3, 3, 5, 0.5, rng);
  FeatureSpec spec = default_feature_spec(set);
  ASSERT_TRUE(std::holds_alternative<DegreeOneHot>(spec));
  EXPECT_EQ(feature_dim(spec), 64u);
  EXPECT_THROW(attach_features(set, NodeLabelOneHot{2}), DataError);
}

TEST(Statistics, ShapeIsomorphismAndDeterminism) {
  Rng rng(2);
  GraphSet set = random_graph_set(6, 4, 15, 0.3, rng);
  set.graphs.push_back(permute_nodes(set[0], random_permutation(set[0].num_nodes(), rng)));
  EmbeddingSet e = extract_statistics(set);
  EXPECT_EQ(e.dim(), 74u);
  EXPECT_EQ(e.size(), set.size());
  for (std::size_t c = 0; c < e.dim(); ++c) EXPECT_EQ(e.data(0, c), e.data(6, c));
  EXPECT_EQ(extract_statistics(set, 3).data, e.data);
}

TEST(RandomGnn, SeededAndPermutationInvariant) {
  GraphSet set = small_corpus(3);
  Rng rng(4);
  set.graphs.push_back(permute_nodes(set[2], random_permutation(set[2].num_nodes(), rng)));
  EmbeddingSet a = extract_random_gnn(set, 16, 3, 9);
  EmbeddingSet b = extract_random_gnn(set, 16, 3, 9, 4);
  EXPECT_EQ(a.data, b.data);
  EXPECT_EQ(a.dim(), 48u);
  for (std::size_t c = 0; c < a.dim(); ++c) EXPECT_NEAR(a.data(2, c), a.data(set.size() - 1, c), 1e-9);
  EXPECT_NE(extract_random_gnn(set, 16, 3, 10).data, a.data);
}

TEST(RandomGnn, HandSetOneLayer) {
  ParamStore store;
  store.add("enc0.w_neigh", DenseMatrix::from_rows({{2}}));
  store.add("enc0.w_self", DenseMatrix::from_rows({{3}}));
  store.add("enc0.bias", DenseMatrix(1, 1));
  GraphSet set;
  set.graphs.emplace_back(1, 2, std::vector<Edge>{{0, 1}}, DenseMatrix::from_rows({{1}, {5}}));
  EmbeddingSet e = embed_with_encoder(store, 1, set, "random-gnn", "hand");
  EXPECT_EQ(e.data, DenseMatrix::from_rows({{15}}));
}

TEST(RandomGnn, RequiresFeatures) {
  Rng rng(5);
  GraphSet set = random_graph_set(2, 3, 5, 0.5, rng);
  EXPECT_THROW(extract_random_gnn(set, 4, 1, 0), ArgumentError);
}

TEST(Gmae, ZeroEpochsEqualsInit) {
  GraphSet set = small_corpus(6);
  GmaeConfig cfg;
  cfg.epochs = 0;
  GmaeModel trained = train_gmae(set, cfg);
  GmaeModel init = init_gmae(64, cfg);
  EXPECT_TRUE(trained.params.same_values(init.params));
  EXPECT_TRUE(trained.epoch_losses.empty());
  for (double v : init.params.at("mask_token").value.data()) EXPECT_EQ(v, 0.0);
}

TEST(Gmae, BitReproducible) {
  GraphSet set = small_corpus(7);
  GmaeConfig cfg;
  cfg.epochs = 4;
  cfg.seed = 11;
  GmaeModel a = train_gmae(set, cfg);
  GmaeModel b = train_gmae(set, cfg);
  EXPECT_TRUE(a.params.same_values(b.params));
  EXPECT_EQ(a.epoch_losses, b.epoch_losses);
  cfg.seed = 12;
  EXPECT_FALSE(train_gmae(set, cfg).params.same_values(a.params));
}

TEST(Gmae, TwoNodeNodeBranchHalvesLoss) {
  GraphSet set;
  set.graphs.emplace_back(1, 2, std::vector<Edge>{{0, 1}},
                          DenseMatrix::from_rows({{1.0, 0.5, -0.25}, {0.2, 1.0, 0.75}}));
  GmaeConfig cfg;
  cfg.epochs = 200;
  cfg.branch_policy = MaskBranchPolicy::kNodeOnly;
  GmaeModel model = train_gmae(set, cfg);
  ASSERT_EQ(model.epoch_losses.size(), 200u);
  EXPECT_LE(model.epoch_losses.back(), 0.5 * model.epoch_losses.front());
  double first = 0, last = 0;
  for (int i = 0; i < 20; ++i) {
    first += model.epoch_losses[i];
    last += model.epoch_losses[180 + i];
  }
  EXPECT_LT(last, first);
}

TEST(Gmae, ExtractShapeDeterminismInvariance) {
  GraphSet set = small_corpus(8);
  GmaeConfig cfg;
  cfg.epochs = 2;
  GmaeModel model = train_gmae(set, cfg);
  Rng rng(9);
  GraphSet probe = set;
  probe.graphs.push_back(permute_nodes(set[4], random_permutation(set[4].num_nodes(), rng)));
  EmbeddingSet a = extract_gmae(model, probe);
  EXPECT_EQ(a.dim(), 64u);
  EXPECT_EQ(extract_gmae(model, probe, 3).data, a.data);
  for (std::size_t c = 0; c < a.dim(); ++c) EXPECT_NEAR(a.data(4, c), a.data(probe.size() - 1, c), 1e-9);
}

TEST(Gmae, FeatureDimensionMismatchIsConfigError) {
  GraphSet set = small_corpus(10);
  GmaeConfig cfg;
  cfg.epochs = 1;
  GmaeModel model = train_gmae(set, cfg);
  GraphSet other = attach_features(set, DegreeOneHot{7});
  EXPECT_THROW(extract_gmae(model, other), ConfigError);
}

TEST(Gmae, ConfigValidation) {
  GmaeConfig cfg;
  cfg.mask_rate = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.mask_rate = 0.2;
  cfg.num_layers = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

// Whole-step gradients: replaying the same random stream makes the loss a
// deterministic function of the parameters.
TEST(Gmae, StepGradientsMatchFiniteDifferences) {
  Rng graphs(12);
  for (int trial = 0; trial < 6; ++trial) {
    GraphSet set;
    set.graphs.push_back(random_graph(6 + graphs.uniform_index(5), 0.4, graphs));
    set = attach_features(set, DegreeOneHot{5});
    GmaeConfig cfg;
    cfg.hidden_dim = 4;
    cfg.num_layers = 2;
    cfg.mask_rate = 0.4;
    cfg.seed = trial;
    GmaeModel model = init_gmae(6, cfg);
    // Non-zero mask token and bias so every parameter carries gradient.
    Rng noise(100 + trial);
    for (Parameter& p : model.params.params())
      for (double& v : p.value.data()) v += noise.uniform_real(-0.3, 0.3);
    const bool node_branch = trial % 2 == 0;
    const std::uint64_t stream = 77 + trial;
    auto loss_fn = [&] {
      Rng r(stream);
      GmaeModel copy = model;
      return node_branch ? gmae_node_step(copy, set[0], r) : gmae_edge_step(copy, set[0], r);
    };
    model.params.zero_grad();
    {
      Rng r(stream);
      node_branch ? gmae_node_step(model, set[0], r) : gmae_edge_step(model, set[0], r);
    }
    for (Parameter& p : model.params.params()) {
      std::vector<double> analytic = p.grad.data();
      std::vector<double> numeric = numeric_gradient(p.value.data(), loss_fn);
      if (!node_branch && p.name.rfind("decoder", 0) == 0) continue;
      if (!node_branch && p.name == "mask_token") continue;
      EXPECT_LT(relative_error(analytic, numeric), 1e-5) << p.name << " trial " << trial;
    }
  }
}

TEST(Gmae, SaveLoadRoundTrip) {
  GraphSet set = small_corpus(13);
  GmaeConfig cfg;
  cfg.epochs = 2;
  GmaeModel model = train_gmae(set, cfg);
  GmaeModel back = load_gmae_json(save_gmae_json(model));
  EXPECT_TRUE(back.params.same_values(model.params));
  EXPECT_EQ(back.in_dim, model.in_dim);
  EXPECT_EQ(back.epoch_losses, model.epoch_losses);
  EXPECT_EQ(extract_gmae(back, set).data, extract_gmae(model, set).data);
  EXPECT_THROW(load_gmae_json("{\"format\": \"other\"}"), ConfigError);
  EXPECT_THROW(load_gmae_json("not json"), ConfigError);
}
