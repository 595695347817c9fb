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

#include "gunlearn/oracle.h"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "gunlearn/model.h"
#include "gunlearn/synthetic.h"
#include "test_util.h"

namespace gunlearn {
namespace {

using testing::MaxAbs;
using testing::RandomDataset;
using testing::Triangle;

// Dense sum_l w_l (D^-1/2 A D^-1/2)^l x over live nodes.
Eigen::MatrixXd DenseEmbeddings(const Graph& g, const Eigen::MatrixXd& x,
                                const std::vector<double>& w) {
  const NodeId n = g.num_nodes();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : g.neighbors(u))
      p(u, v) = 1.0 / std::sqrt(static_cast<double>(g.degree(u)) * g.degree(v));
  Eigen::MatrixXd term = x;
  for (NodeId u = 0; u < n; ++u)
    if (!g.is_live(u)) term.row(u).setZero();
  Eigen::MatrixXd z = w[0] * term;
  for (std::size_t l = 1; l < w.size(); ++l) {
    term = p * term;
    z += w[l] * term;
  }
  return z;
}

// Signal whose columns satisfy ||D^1/2 x||_1 <= 1.
Eigen::MatrixXd ScaledSignal(const Graph& g, int columns, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::MatrixXd x(g.num_nodes(), columns);
  for (int j = 0; j < columns; ++j) {
    double mass = 0.0;
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      x(u, j) = unit(rng);
      mass += std::sqrt(static_cast<double>(g.degree(u))) * std::abs(x(u, j));
    }
    x.col(j) /= std::max(1.0, mass);
  }
  return x;
}

TEST(ExactEmbeddingsTest, IdentityWeights) {
  const Graph g = RandomGraph(20, 40, 1);
  const Eigen::MatrixXd x = ScaledSignal(g, 3, 1);
  const std::vector<double> w = {1.0, 0.0, 0.0};
  EXPECT_EQ(ExactEmbeddings(g, x, 2, w), x);
}

TEST(ExactEmbeddingsTest, SingleNodeScalesByWeightSum) {
  const Graph g(1);
  Eigen::MatrixXd x(1, 2);
  x << 0.3, -0.7;
  const std::vector<double> w = {0.2, -0.1, 0.4};
  const Eigen::MatrixXd z = ExactEmbeddings(g, x, 2, w);
  EXPECT_NEAR(z(0, 0), 0.5 * 0.3, 1e-15);
  EXPECT_NEAR(z(0, 1), 0.5 * -0.7, 1e-15);
}

TEST(ExactEmbeddingsTest, TriangleDirectProduct) {
  const Graph g = Triangle();
  Eigen::MatrixXd x(3, 1);
  x << 0.1, 0.2, -0.05;
  const std::vector<double> w = {0.0, 0.0, 1.0};
  const Eigen::Matrix3d p = Eigen::Matrix3d::Constant(1.0 / 3.0);
  const Eigen::Vector3d expected = p * (p * x.col(0));
  const Eigen::MatrixXd z = ExactEmbeddings(g, x, 2, w);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(z(i, 0), expected[i], 1e-15);
    EXPECT_NEAR(z(i, 0), x.sum() / 3.0, 1e-15);
  }
}

TEST(ExactEmbeddingsTest, AgreesWithDenseMatrixPowers) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    Dataset d = RandomDataset(RandomGraph(30, 70, trial), 2, 2, trial);
    RemoveNode(d, 4);
    const Eigen::MatrixXd x = ScaledSignal(d.graph, 3, trial);
    const int levels = 1 + trial % 4;
    const std::vector<double> w = testing::RandomWeights(levels, rng);
    EXPECT_LE(MaxAbs(ExactEmbeddings(d.graph, x, levels, w),
                     DenseEmbeddings(d.graph, x, w)),
              1e-14);
  }
}

class PerturbationBoundTest : public ::testing::Test {
 protected:
  static constexpr int kColumns = 4;
  static constexpr int kLevels = 3;
  const std::vector<double> weights_ = {0.25, 0.25, 0.25, 0.25};

  Eigen::VectorXd ColumnShift(const Graph& before, const Graph& after,
                              const Eigen::MatrixXd& x_before,
                              const Eigen::MatrixXd& x_after) const {
    const Eigen::MatrixXd diff =
        ExactEmbeddings(before, x_before, kLevels, weights_) -
        ExactEmbeddings(after, x_after, kLevels, weights_);
    return diff.colwise().norm().transpose();
  }
};

TEST_F(PerturbationBoundTest, FeatureRemoval) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = RandomGraph(40, 60 + trial, trial);
    const Eigen::MatrixXd x = ScaledSignal(g, kColumns, trial);
    const NodeId u = std::uniform_int_distribution<NodeId>(0, 39)(rng);
    Eigen::MatrixXd x_after = x;
    x_after.row(u).setZero();
    const double bound = std::sqrt(static_cast<double>(g.degree(u)));
    EXPECT_LE(ColumnShift(g, g, x, x_after).maxCoeff(), bound);
  }
}

TEST_F(PerturbationBoundTest, EdgeRemoval) {
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = RandomGraph(40, 60 + trial, 200 + trial);
    const Eigen::MatrixXd x = ScaledSignal(g, kColumns, trial);
    const auto edges = g.Edges();
    const auto [u, v] = edges[trial % edges.size()];
    Graph after = g;
    after.RemoveEdge(u, v);
    const double bound = 4.0 / std::sqrt(static_cast<double>(g.degree(u))) +
                         4.0 / std::sqrt(static_cast<double>(g.degree(v)));
    EXPECT_LE(ColumnShift(g, after, x, x).maxCoeff(), bound);
  }
}

TEST_F(PerturbationBoundTest, NodeRemoval) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Dataset d = RandomDataset(RandomGraph(40, 60 + trial, 400 + trial), 1, 2, trial);
    const Graph before = d.graph;
    const Eigen::MatrixXd x = ScaledSignal(before, kColumns, trial);
    const NodeId u = std::uniform_int_distribution<NodeId>(0, 39)(rng);
    double bound = 4.0 * std::sqrt(static_cast<double>(before.degree(u)));
    for (NodeId w : before.neighbors(u))
      if (w != u) bound += 4.0 / std::sqrt(static_cast<double>(before.degree(w)));
    RemoveNode(d, u);
    Eigen::MatrixXd x_after = x;
    x_after.row(u).setZero();
    EXPECT_LE(ColumnShift(before, d.graph, x, x_after).maxCoeff(), bound);
  }
}

TEST(EmbeddingNormTest, ColumnsHaveNormAtMostOne) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = RandomGraph(50, 100 + 3 * trial, trial);
    const Eigen::MatrixXd x = ScaledSignal(g, 3, trial);
    const int levels = 1 + trial % 5;
    const Eigen::MatrixXd z =
        ExactEmbeddings(g, x, levels, testing::RandomWeights(levels, rng));
    EXPECT_LE(z.colwise().norm().maxCoeff(), 1.0);
  }
}

TEST(ExactGradientResidualTest, ZeroAtExactMinimizer) {
  const Graph g = RandomGraph(50, 120, 7);
  const Eigen::MatrixXd z = ExactEmbeddings(
      g, ScaledSignal(g, 4, 7) * 10.0, 2, std::vector<double>{0.0, 0.0, 1.0});
  std::vector<NodeId> rows(50);
  for (NodeId i = 0; i < 50; ++i) rows[i] = i;
  Eigen::VectorXd y(50);
  for (int i = 0; i < 50; ++i) y[i] = i % 2 ? 1.0 : -1.0;
  const LossSpec spec = LossSpec::Logistic(1e-2);
  const Eigen::VectorXd w = TrainBinary(z, rows, y, spec, {});
  EXPECT_LE(ExactGradientResidual(w, z, rows, y, spec), 1e-10 * 50);
  EXPECT_NEAR(ExactGradientResidual(w, z, rows, y, spec),
              Gradient(w, z, rows, y, spec).norm(), 1e-15);
}

}  // namespace
}  // namespace gunlearn
