//
// Copyright 2026 The gunlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "gunlearn/graph.h"

#include <algorithm>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "gunlearn/dataset_io.h"
#include "gunlearn/errors.h"
#include "gunlearn/synthetic.h"
#include "test_util.h"

namespace gunlearn {
namespace {

using testing::RandomDataset;
using testing::Star;
using testing::Triangle;

void ExpectSymmetric(const Graph& g) {
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      ASSERT_TRUE(g.HasEdge(v, u)) << u << " -> " << v;
      const auto back = g.neighbors(v);
      ASSERT_TRUE(std::find(back.begin(), back.end(), u) != back.end());
    }
    EXPECT_EQ(g.degree(u), g.neighbors(u).size());
    if (g.is_live(u)) EXPECT_TRUE(g.HasEdge(u, u));
  }
}

TEST(EdgeListTest, EmptyFileGivesIsolatedNodesWithSelfLoops) {
  std::istringstream in("");
  const Graph g = ParseEdgeList(in, 3);
  ASSERT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 0u);
  for (NodeId u = 0; u < 3; ++u) EXPECT_EQ(g.degree(u), 1u);
}

TEST(EdgeListTest, TriangleHasDegreeThree) {
  std::istringstream in("0 1\n1 2\n0 2\n");
  const Graph g = ParseEdgeList(in, 3);
  EXPECT_EQ(g.num_edges(), 3u);
  for (NodeId u = 0; u < 3; ++u) EXPECT_EQ(g.degree(u), 3u);
}

TEST(EdgeListTest, SymmetricDuplicateStoredOnce) {
  std::istringstream in("0 1\n1 0\n");
  const Graph g = ParseEdgeList(in, 2);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(g.degree(0), 2u);
  EXPECT_EQ(g.degree(1), 2u);
}

TEST(EdgeListTest, MalformedLineReportsLineNumber) {
  std::istringstream in("0 1\n# comment\n1 x\n");
  try {
    ParseEdgeList(in, 3);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(EdgeListTest, OutOfRangeIdIsRejected) {
  std::istringstream in("0 5\n");
  EXPECT_THROW(ParseEdgeList(in, 3), RangeError);
}

TEST(EdgeListTest, WriteParseRoundTrip) {
  const Graph g = RandomGraph(40, 90, 3);
  std::ostringstream out;
  WriteEdgeList(out, g.Edges());
  std::istringstream in(out.str());
  EXPECT_EQ(ParseEdgeList(in, 40), g);
}

TEST(GraphTest, RemoveEdgeUpdatesDegrees) {
  Graph g = Triangle();
  const EdgeDelta d = g.RemoveEdge(0, 1);
  EXPECT_EQ(d.old_degree_u, 3u);
  EXPECT_EQ(d.old_degree_v, 3u);
  EXPECT_EQ(g.degree(0), 2u);
  EXPECT_EQ(g.degree(1), 2u);
  EXPECT_EQ(g.degree(2), 3u);
  EXPECT_FALSE(g.HasEdge(1, 0));
}

TEST(GraphTest, RemovingAnEdgeTwiceFailsAndLeavesGraphUnchanged) {
  Graph g = Triangle();
  g.RemoveEdge(0, 1);
  const Graph before = g;
  EXPECT_THROW(g.RemoveEdge(1, 0), NotFoundError);
  EXPECT_EQ(g, before);
}

TEST(GraphTest, StarLeafRemoval) {
  Graph g = Star(4);
  g.RemoveEdge(0, 3);
  EXPECT_EQ(g.degree(0), 4u);
  EXPECT_EQ(g.degree(3), 1u);
}

TEST(GraphTest, SelfPairAndOutOfRangeRejected) {
  Graph g = Triangle();
  EXPECT_THROW(g.RemoveEdge(1, 1), NotFoundError);
  EXPECT_THROW(g.RemoveEdge(0, 7), RangeError);
  const std::vector<std::pair<NodeId, NodeId>> self = {{2, 2}};
  EXPECT_THROW(Graph::FromEdges(3, self), ConfigError);
}

TEST(DatasetTest, IsolatedNodeRemovalYieldsOneSelfLoopDelta) {
  Dataset d = RandomDataset(Graph(3), 2, 2, 1);
  const auto deltas = RemoveNode(d, 1);
  ASSERT_EQ(deltas.size(), 1u);
  EXPECT_TRUE(deltas[0].is_self_loop());
  EXPECT_TRUE(d.store.features.row(1).isZero());
  EXPECT_FALSE(d.graph.is_live(1));
  EXPECT_EQ(d.graph.degree(1), 0u);
}

TEST(DatasetTest, TriangleNodeRemovalOrder) {
  Dataset d = RandomDataset(Triangle(), 2, 2, 1);
  const auto deltas = RemoveNode(d, 2);
  ASSERT_EQ(deltas.size(), 3u);
  EXPECT_EQ(deltas[0], (EdgeDelta{2, 0, 3, 3}));
  EXPECT_EQ(deltas[1], (EdgeDelta{2, 1, 2, 3}));
  EXPECT_TRUE(deltas[2].is_self_loop());
  const std::vector<std::pair<NodeId, NodeId>> left = {{0, 1}};
  EXPECT_EQ(d.graph.Edges(), left);
  EXPECT_EQ(d.graph.degree(0), 2u);
  EXPECT_EQ(d.graph.degree(1), 2u);
}

TEST(DatasetTest, StarCenterRemovalIsolatesLeaves) {
  Dataset d = RandomDataset(Star(4), 2, 2, 1);
  const auto deltas = RemoveNode(d, 0);
  ASSERT_EQ(deltas.size(), 5u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(deltas[i].v, static_cast<NodeId>(i + 1));
  for (NodeId leaf = 1; leaf <= 4; ++leaf) EXPECT_EQ(d.graph.degree(leaf), 1u);
}

TEST(DatasetTest, RemovedNodeRejectsFurtherRemovals) {
  Dataset d = RandomDataset(Triangle(), 2, 2, 1);
  RemoveNode(d, 0);
  EXPECT_THROW(RemoveNode(d, 0), NotFoundError);
  EXPECT_THROW(ZeroFeature(d, 0), NotFoundError);
  EXPECT_THROW(RemoveEdge(d, 0, 1), NotFoundError);
  EXPECT_THROW(ZeroFeature(d, 9), RangeError);
}

TEST(DatasetTest, ZeroFeatureBookkeeping) {
  Dataset d = RandomDataset(Triangle(), 2, 2, 1);
  d.store.split[2] = Split::kTest;
  d.store.ResetTrainMask();
  ASSERT_EQ(d.store.num_train, 2u);

  ZeroFeature(d, 0);
  EXPECT_EQ(d.store.num_train, 1u);
  EXPECT_TRUE(d.store.features.row(0).isZero());
  ZeroFeature(d, 0);
  EXPECT_EQ(d.store.num_train, 1u);

  ZeroFeature(d, 2);
  EXPECT_EQ(d.store.num_train, 1u);
  EXPECT_TRUE(d.store.features.row(2).isZero());
  EXPECT_EQ(d.TrainRows(), std::vector<NodeId>{1});
}

TEST(GraphPropertyTest, NodeRemovalEqualsEdgeByEdgeRemoval) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = RandomGraph(30, 60, 100 + trial);
    const NodeId u = std::uniform_int_distribution<NodeId>(0, 29)(rng);
    Graph by_edges = g;
    std::vector<NodeId> nbrs(g.neighbors(u).begin(), g.neighbors(u).end());
    for (NodeId w : nbrs)
      if (w != u) by_edges.RemoveEdge(u, w);
    by_edges.RemoveSelfLoop(u);

    Dataset d = RandomDataset(g, 2, 2, 1);
    RemoveNode(d, u);
    EXPECT_EQ(d.graph, by_edges);
  }
}

TEST(GraphPropertyTest, SymmetryAndDegreeConsistencyUnderRandomSequences) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    Dataset d = RandomDataset(RandomGraph(25, 50, trial), 2, 2, trial);
    for (int step = 0; step < 25; ++step) {
      const auto item = testing::RandomItem(
          d, std::uniform_int_distribution<int>(0, 2)(rng), rng);
      if (!item) break;
      if (const auto* e = std::get_if<EdgeRemoval>(&*item)) {
        RemoveEdge(d, e->u, e->v);
      } else if (const auto* nr = std::get_if<NodeRemoval>(&*item)) {
        RemoveNode(d, nr->u);
      } else {
        ZeroFeature(d, std::get<FeatureRemoval>(*item).u);
      }
      ExpectSymmetric(d.graph);
    }
  }
}

}  // namespace
}  // namespace gunlearn
