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

#ifndef GUNLEARN_TESTS_TEST_UTIL_H_
#define GUNLEARN_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gunlearn/graph.h"
#include "gunlearn/oracle.h"
#include "gunlearn/propagation.h"
#include "gunlearn/synthetic.h"

namespace gunlearn::testing {

inline Graph Triangle() {
  const std::vector<std::pair<NodeId, NodeId>> e = {{0, 1}, {1, 2}, {0, 2}};
  return Graph::FromEdges(3, e);
}

// Center 0 with leaves 1..leaves.
inline Graph Star(NodeId leaves) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph::FromEdges(leaves + 1, e);
}

// Dataset over `g` with uniform random features in [-1, 1], round-robin
// labels and every node in training.
inline Dataset RandomDataset(Graph g, int num_features, int num_classes,
                             std::uint64_t seed) {
  Dataset d;
  const NodeId n = g.num_nodes();
  d.graph = std::move(g);
  d.num_classes = num_classes;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  d.store.features.resize(n, num_features);
  for (NodeId i = 0; i < n; ++i)
    for (int j = 0; j < num_features; ++j) d.store.features(i, j) = unit(rng);
  d.store.labels.resize(n);
  for (NodeId i = 0; i < n; ++i) d.store.labels[i] = static_cast<int>(i) % num_classes;
  d.store.split.assign(n, Split::kTrain);
  d.store.ResetTrainMask();
  return d;
}

inline double MaxAbs(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

inline Eigen::MatrixXd Oracle(const Graph& g, const PropagationState& s) {
  return ExactEmbeddings(g, s.signal(), s.levels(), s.weights());
}

// Applies `request` to the graph and then to the propagation state.
inline void ApplyRequest(Dataset& data, PropagationState& state,
                         const RemovalRequest& request) {
  if (request.batch) {
    std::vector<EdgeDelta> deltas;
    std::vector<NodeId> zeroed;
    for (const RemovalItem& item : request.items) {
      if (const auto* e = std::get_if<EdgeRemoval>(&item)) {
        deltas.push_back(RemoveEdge(data, e->u, e->v));
      } else if (const auto* nr = std::get_if<NodeRemoval>(&item)) {
        for (const EdgeDelta& d : RemoveNode(data, nr->u)) deltas.push_back(d);
      } else {
        const NodeId u = std::get<FeatureRemoval>(item).u;
        ZeroFeature(data, u);
        zeroed.push_back(u);
      }
    }
    state.ApplyBatchRemoval(data.graph, deltas, zeroed);
    return;
  }
  const RemovalItem& item = request.items.front();
  if (const auto* e = std::get_if<EdgeRemoval>(&item)) {
    state.ApplyEdgeRemoval(data.graph, RemoveEdge(data, e->u, e->v));
  } else if (const auto* nr = std::get_if<NodeRemoval>(&item)) {
    const std::vector<EdgeDelta> deltas = RemoveNode(data, nr->u);
    state.ApplyNodeRemoval(data.graph, nr->u, deltas);
  } else {
    const NodeId u = std::get<FeatureRemoval>(item).u;
    ZeroFeature(data, u);
    state.ApplyFeatureRemoval(data.graph, u);
  }
}

// A random applicable item on the current dataset, or nullopt when nothing
// is left. `kind` 0 edge, 1 node, 2 feature.
inline std::optional<RemovalItem> RandomItem(const Dataset& data, int kind,
                                             std::mt19937_64& rng) {
  const Graph& g = data.graph;
  std::vector<NodeId> live;
  for (NodeId u = 0; u < g.num_nodes(); ++u)
    if (g.is_live(u)) live.push_back(u);
  if (live.size() <= 2) return std::nullopt;
  if (kind == 0) {
    const auto edges = g.Edges();
    if (edges.empty()) return std::nullopt;
    const auto& [u, v] =
        edges[std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng)];
    return EdgeRemoval{u, v};
  }
  const NodeId u =
      live[std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng)];
  if (kind == 1) return NodeRemoval{u};
  return FeatureRemoval{u};
}

// Random request mixing the three kinds; batches hold 2..5 distinct items.
inline std::optional<RemovalRequest> RandomRequest(const Dataset& data,
                                                   std::mt19937_64& rng) {
  const int pick = std::uniform_int_distribution<int>(0, 3)(rng);
  if (pick < 3) {
    auto item = RandomItem(data, pick, rng);
    if (!item) return std::nullopt;
    return RemovalRequest::Single(*item);
  }
  Dataset scratch = data;
  std::vector<RemovalItem> items;
  const int size = std::uniform_int_distribution<int>(2, 5)(rng);
  for (int i = 0; i < size; ++i) {
    auto item = RandomItem(scratch, std::uniform_int_distribution<int>(0, 2)(rng), rng);
    if (!item) break;
    if (const auto* e = std::get_if<EdgeRemoval>(&*item)) {
      RemoveEdge(scratch, e->u, e->v);
    } else if (const auto* nr = std::get_if<NodeRemoval>(&*item)) {
      RemoveNode(scratch, nr->u);
    } else {
      ZeroFeature(scratch, std::get<FeatureRemoval>(*item).u);
    }
    items.push_back(*item);
  }
  if (items.empty()) return std::nullopt;
  return RemovalRequest::Batch(std::move(items));
}

// Random weights with sum |w| = 1.
inline std::vector<double> RandomWeights(int levels, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> w(static_cast<std::size_t>(levels) + 1);
  double total = 0.0;
  for (double& x : w) {
    x = unit(rng);
    total += std::abs(x);
  }
  for (double& x : w) x /= total;
  return w;
}

}  // namespace gunlearn::testing

#endif  // GUNLEARN_TESTS_TEST_UTIL_H_
