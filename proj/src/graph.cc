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
#include <string>

#include "gunlearn/errors.h"

namespace gunlearn {

Graph::Graph(NodeId num_nodes)
    : adjacency_(num_nodes), live_(num_nodes, 1), num_live_(num_nodes) {
  for (NodeId u = 0; u < num_nodes; ++u) adjacency_[u].push_back(u);
}

Graph Graph::FromEdges(NodeId num_nodes,
                       std::span<const std::pair<NodeId, NodeId>> edges) {
  Graph g(num_nodes);
  for (const auto& [u, v] : edges) {
    if (u >= num_nodes || v >= num_nodes) {
      throw RangeError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                       ") has an endpoint >= n=" + std::to_string(num_nodes));
    }
    if (u == v) {
      throw ConfigError("self pair (" + std::to_string(u) + "," +
                        std::to_string(v) + ") in edge list");
    }
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  std::size_t directed = 0;
  for (auto& list : g.adjacency_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    directed += list.size() - 1;
  }
  g.num_edges_ = directed / 2;
  return g;
}

void Graph::CheckNode(NodeId u) const {
  if (u >= num_nodes()) {
    throw RangeError("node " + std::to_string(u) + " out of range (n=" +
                     std::to_string(num_nodes()) + ")");
  }
}

bool Graph::HasEdge(NodeId u, NodeId v) const {
  if (u >= num_nodes() || v >= num_nodes()) return false;
  const auto& list = adjacency_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

EdgeDelta Graph::RemoveEdge(NodeId u, NodeId v) {
  CheckNode(u);
  CheckNode(v);
  if (u == v) {
    throw NotFoundError("edge removal requires distinct endpoints, got " +
                        std::to_string(u));
  }
  auto& lu = adjacency_[u];
  auto& lv = adjacency_[v];
  auto iu = std::lower_bound(lu.begin(), lu.end(), v);
  if (iu == lu.end() || *iu != v) {
    throw NotFoundError("edge (" + std::to_string(u) + "," +
                        std::to_string(v) + ") not found");
  }
  EdgeDelta delta{u, v, degree(u), degree(v)};
  lu.erase(iu);
  lv.erase(std::lower_bound(lv.begin(), lv.end(), u));
  --num_edges_;
  return delta;
}

EdgeDelta Graph::RemoveSelfLoop(NodeId u) {
  CheckNode(u);
  if (!is_live(u)) {
    throw NotFoundError("node " + std::to_string(u) + " is not live");
  }
  if (adjacency_[u].size() != 1) {
    throw ConfigError("node " + std::to_string(u) +
                      " still has incident edges");
  }
  EdgeDelta delta{u, u, 1, 1};
  adjacency_[u].clear();
  live_[u] = 0;
  --num_live_;
  return delta;
}

std::vector<std::pair<NodeId, NodeId>> Graph::Edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(num_edges_);
  for (NodeId u = 0; u < num_nodes(); ++u) {
    for (NodeId v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

void FeatureStore::ResetTrainMask() {
  in_train.assign(split.size(), 0);
  num_train = 0;
  for (std::size_t i = 0; i < split.size(); ++i) {
    if (split[i] == Split::kTrain) {
      in_train[i] = 1;
      ++num_train;
    }
  }
}

std::vector<NodeId> Dataset::NodesInSplit(Split s) const {
  std::vector<NodeId> out;
  for (NodeId u = 0; u < num_nodes(); ++u) {
    if (graph.is_live(u) && store.split[u] == s) out.push_back(u);
  }
  return out;
}

std::vector<NodeId> Dataset::TrainRows() const {
  std::vector<NodeId> out;
  out.reserve(store.num_train);
  for (NodeId u = 0; u < num_nodes(); ++u) {
    if (store.in_train[u]) out.push_back(u);
  }
  return out;
}

void Dataset::Validate() const {
  const std::size_t n = num_nodes();
  if (static_cast<std::size_t>(store.features.rows()) != n ||
      store.labels.size() != n || store.split.size() != n ||
      store.in_train.size() != n) {
    throw ConfigError("dataset components disagree on the node count " +
                      std::to_string(n));
  }
  if (num_classes < 1) throw ConfigError("num_classes must be positive");
  for (std::size_t i = 0; i < n; ++i) {
    if (store.labels[i] < 0 || store.labels[i] >= num_classes) {
      throw ConfigError("label of node " + std::to_string(i) +
                        " outside [0, num_classes)");
    }
  }
}

const char* RemovalKindName(RemovalKind kind) {
  switch (kind) {
    case RemovalKind::kEdge:
      return "edge";
    case RemovalKind::kNode:
      return "node";
    case RemovalKind::kFeature:
      return "feature";
    case RemovalKind::kBatch:
      return "batch";
  }
  return "unknown";
}

RemovalKind KindOf(const RemovalItem& item) {
  if (std::holds_alternative<EdgeRemoval>(item)) return RemovalKind::kEdge;
  if (std::holds_alternative<NodeRemoval>(item)) return RemovalKind::kNode;
  return RemovalKind::kFeature;
}

RemovalKind KindOf(const RemovalRequest& request) {
  if (request.batch || request.items.size() != 1) return RemovalKind::kBatch;
  return KindOf(request.items.front());
}

void CheckApplicable(const Dataset& data, const RemovalItem& item) {
  const NodeId n = data.num_nodes();
  auto check_live = [&](NodeId u) {
    if (u >= n) {
      throw RangeError("node " + std::to_string(u) + " out of range (n=" +
                       std::to_string(n) + ")");
    }
    if (!data.graph.is_live(u)) {
      throw NotFoundError("node " + std::to_string(u) + " is not live");
    }
  };
  if (const auto* e = std::get_if<EdgeRemoval>(&item)) {
    check_live(e->u);
    check_live(e->v);
    if (e->u == e->v || !data.graph.HasEdge(e->u, e->v)) {
      throw NotFoundError("edge (" + std::to_string(e->u) + "," +
                          std::to_string(e->v) + ") not found");
    }
  } else if (const auto* r = std::get_if<NodeRemoval>(&item)) {
    check_live(r->u);
  } else {
    check_live(std::get<FeatureRemoval>(item).u);
  }
}

EdgeDelta RemoveEdge(Dataset& data, NodeId u, NodeId v) {
  CheckApplicable(data, EdgeRemoval{u, v});
  return data.graph.RemoveEdge(u, v);
}

void ZeroFeature(Dataset& data, NodeId u) {
  CheckApplicable(data, FeatureRemoval{u});
  data.store.features.row(u).setZero();
  if (data.store.in_train[u]) {
    data.store.in_train[u] = 0;
    --data.store.num_train;
  }
}

std::vector<EdgeDelta> RemoveNode(Dataset& data, NodeId u) {
  CheckApplicable(data, NodeRemoval{u});
  const auto nbrs = data.graph.neighbors(u);
  std::vector<NodeId> others;
  for (NodeId w : nbrs) {
    if (w != u) others.push_back(w);
  }
  std::vector<EdgeDelta> deltas;
  deltas.reserve(others.size() + 1);
  for (NodeId w : others) deltas.push_back(data.graph.RemoveEdge(u, w));
  ZeroFeature(data, u);
  deltas.push_back(data.graph.RemoveSelfLoop(u));
  return deltas;
}

}  // namespace gunlearn
