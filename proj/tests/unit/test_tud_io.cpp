#include <gtest/gtest.h>

#include "ggmeval/tud_io.hpp"
#include "test_support.hpp"

using namespace ggmeval;
using ggmeval::testing::TempDir;
using ggmeval::testing::write_file;

#ifndef GGMEVAL_TEST_DATA_DIR
#error "GGMEVAL_TEST_DATA_DIR must be defined"
#endif

namespace {
const std::filesystem::path kFixture = std::filesystem::path(GGMEVAL_TEST_DATA_DIR) / "fixture";
}

TEST(TudLoad, HandBuiltFixture) {
  LoadReport rep;
  GraphSet set = load_tud_dataset(kFixture, "FIXTURE", &rep);
  ASSERT_EQ(set.size(), 2u);
  EXPECT_EQ(set[0].id(), 1);
  EXPECT_EQ(set[0].num_nodes(), 3u);
  EXPECT_EQ(set[0].edges(), (std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_EQ(set[1].id(), 2);
  EXPECT_EQ(set[1].num_nodes(), 2u);
  EXPECT_EQ(set[1].edges(), (std::vector<Edge>{{0, 1}}));
  ASSERT_TRUE(set[0].node_labels().has_value());
  EXPECT_EQ(*set[0].node_labels(), (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(*set[1].node_labels(), (std::vector<int>{1, 1}));
  EXPECT_TRUE(rep.node_labels_present);
  EXPECT_EQ(rep.graph_labels_read, 2u);
  EXPECT_EQ(rep.self_loops_dropped, 0u);
  EXPECT_EQ(rep.duplicate_entries_dropped, 0u);
  EXPECT_FALSE(set.provenance.perturbed);
}

TEST(TudLoad, MissingNodeLabelsFile) {
  TempDir tmp("tud");
  write_file(tmp.path() / "X_A.txt", "1, 2\n2, 1\n");
  write_file(tmp.path() / "X_graph_indicator.txt", "1\n1\n2\n");
  GraphSet set = load_tud_dataset(tmp.path(), "X");
  ASSERT_EQ(set.size(), 2u);
  for (const Graph& g : set.graphs) EXPECT_FALSE(g.node_labels().has_value());
  EXPECT_EQ(set[1].num_nodes(), 1u);
  EXPECT_EQ(set[1].num_edges(), 0u);
}

TEST(TudLoad, DropsSelfLoopsAndDuplicates) {
  TempDir tmp("tud");
  write_file(tmp.path() / "X_A.txt", "1, 1\n1, 2\n2, 1\n1, 2\n");
  write_file(tmp.path() / "X_graph_indicator.txt", "1\n1\n");
  LoadReport rep;
  GraphSet set = load_tud_dataset(tmp.path(), "X", &rep);
  EXPECT_EQ(set[0].num_edges(), 1u);
  EXPECT_EQ(rep.self_loops_dropped, 1u);
  EXPECT_EQ(rep.duplicate_entries_dropped, 1u);
}

TEST(TudLoad, GraphsInAscendingIdOrder) {
  TempDir tmp("tud");
  write_file(tmp.path() / "X_A.txt", "1, 2\n2, 1\n");
  write_file(tmp.path() / "X_graph_indicator.txt", "5\n5\n2\n");
  GraphSet set = load_tud_dataset(tmp.path(), "X");
  ASSERT_EQ(set.size(), 2u);
  EXPECT_EQ(set[0].id(), 2);
  EXPECT_EQ(set[1].id(), 5);
  EXPECT_EQ(set[1].num_edges(), 1u);
}

TEST(TudLoad, UnknownNodeReportsLine) {
  TempDir tmp("tud");
  write_file(tmp.path() / "X_A.txt", "1, 2\n2, 9\n");
  write_file(tmp.path() / "X_graph_indicator.txt", "1\n1\n");
  try {
    load_tud_dataset(tmp.path(), "X");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("X_A.txt:2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("unknown graph id"), std::string::npos) << msg;
  }
}

TEST(TudLoad, MalformedIntegerIsFormatError) {
  TempDir tmp("tud");
  write_file(tmp.path() / "X_A.txt", "1, two\n");
  write_file(tmp.path() / "X_graph_indicator.txt", "1\n1\n");
  EXPECT_THROW(load_tud_dataset(tmp.path(), "X"), FormatError);
}

TEST(TudLoad, CrossGraphEdgeIsFormatError) {
  TempDir tmp("tud");
  write_file(tmp.path() / "X_A.txt", "1, 2\n");
  write_file(tmp.path() / "X_graph_indicator.txt", "1\n2\n");
  EXPECT_THROW(load_tud_dataset(tmp.path(), "X"), FormatError);
}

TEST(TudLoad, MissingInputsAreLoadErrors) {
  EXPECT_THROW(load_tud_dataset("/nonexistent/ggmeval", "X"), LoadError);
  TempDir tmp("tud");
  write_file(tmp.path() / "X_A.txt", "1, 2\n");
  EXPECT_THROW(load_tud_dataset(tmp.path(), "X"), LoadError);
}

TEST(TudWrite, RoundTrip) {
  Rng rng(21);
  GraphSet set = ggmeval::testing::random_graph_set(15, 1, 12, 0.3, rng);
  TempDir tmp("tud");
  write_tud_dataset(set, tmp.path(), "RT");
  GraphSet back = load_tud_dataset(tmp.path(), "RT");
  ASSERT_EQ(back.size(), set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    EXPECT_EQ(back[i].num_nodes(), set[i].num_nodes());
    EXPECT_EQ(back[i].edges(), set[i].edges());
  }
}

TEST(TudWrite, RoundTripKeepsLabels) {
  GraphSet fixture = load_tud_dataset(kFixture, "FIXTURE");
  TempDir tmp("tud");
  write_tud_dataset(fixture, tmp.path(), "RT");
  GraphSet back = load_tud_dataset(tmp.path(), "RT");
  EXPECT_EQ(back.graphs, fixture.graphs);
}
