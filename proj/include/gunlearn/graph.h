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

#ifndef GUNLEARN_GRAPH_H_
#define GUNLEARN_GRAPH_H_

#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace gunlearn {

using NodeId = std::uint32_t;

// Record of one adjacency change, consumed by the propagation module. Degrees
// are the values before the removal. A self-loop delta (u == v) marks the
// final step of a node removal.
struct EdgeDelta {
  NodeId u = 0;
  NodeId v = 0;
  std::uint32_t old_degree_u = 0;
  std::uint32_t old_degree_v = 0;

  bool is_self_loop() const { return u == v; }
  friend bool operator==(const EdgeDelta&, const EdgeDelta&) = default;
};

// Undirected graph with an explicit self-loop on every live node. Node ids are
// dense and never reused; a removed node keeps its id with an empty
// neighborhood.
class Graph {
 public:
  explicit Graph(NodeId num_nodes = 0);

  // Builds a graph from undirected pairs. Duplicates (in either orientation)
  // are merged. Self pairs and out-of-range ids are rejected.
  static Graph FromEdges(NodeId num_nodes,
                         std::span<const std::pair<NodeId, NodeId>> edges);

  NodeId num_nodes() const { return static_cast<NodeId>(adjacency_.size()); }
  // Number of undirected edges, self-loops excluded.
  std::size_t num_edges() const { return num_edges_; }
  std::size_t num_live_nodes() const { return num_live_; }

  // d(u), counting the self-loop. Zero for removed nodes.
  std::uint32_t degree(NodeId u) const {
    return static_cast<std::uint32_t>(adjacency_[u].size());
  }
  // Sorted neighbor list, including u itself while u is live.
  std::span<const NodeId> neighbors(NodeId u) const { return adjacency_[u]; }
  bool is_live(NodeId u) const { return live_[u] != 0; }
  bool HasEdge(NodeId u, NodeId v) const;

  // Removes the undirected edge (u, v), u != v. Throws NotFoundError if the
  // edge is absent, leaving the graph unchanged.
  EdgeDelta RemoveEdge(NodeId u, NodeId v);

  // Removes the self-loop of a node whose other edges are already gone and
  // marks it dead.
  EdgeDelta RemoveSelfLoop(NodeId u);

  // Undirected edges with u < v, in lexicographic order.
  std::vector<std::pair<NodeId, NodeId>> Edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void CheckNode(NodeId u) const;

  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<char> live_;
  std::size_t num_edges_ = 0;
  std::size_t num_live_ = 0;
};

enum class Split : std::uint8_t { kTrain, kVal, kTest };

// Raw node attributes: features, class labels and the train/val/test split.
// `in_train` tracks which labels still take part in the training loss.
struct FeatureStore {
  Eigen::MatrixXd features;  // n x F
  std::vector<int> labels;
  std::vector<Split> split;
  std::vector<char> in_train;
  std::size_t num_train = 0;

  // Sets in_train/num_train from `split`.
  void ResetTrainMask();
};

struct Dataset {
  Graph graph;
  FeatureStore store;
  int num_classes = 0;

  NodeId num_nodes() const { return graph.num_nodes(); }
  // Live nodes with the given split, ascending.
  std::vector<NodeId> NodesInSplit(Split s) const;
  // Nodes whose labels take part in training, ascending.
  std::vector<NodeId> TrainRows() const;
  // Checks sizes and label ranges; throws ConfigError.
  void Validate() const;
};

// Removal requests.
struct EdgeRemoval {
  NodeId u = 0;
  NodeId v = 0;
  friend bool operator==(const EdgeRemoval&, const EdgeRemoval&) = default;
};
struct NodeRemoval {
  NodeId u = 0;
  friend bool operator==(const NodeRemoval&, const NodeRemoval&) = default;
};
struct FeatureRemoval {
  NodeId u = 0;
  friend bool operator==(const FeatureRemoval&, const FeatureRemoval&) =
      default;
};
using RemovalItem = std::variant<EdgeRemoval, NodeRemoval, FeatureRemoval>;

// One logical request. `batch` selects the batched propagation update; a
// non-batch request carries exactly one item.
struct RemovalRequest {
  std::vector<RemovalItem> items;
  bool batch = false;

  static RemovalRequest Single(RemovalItem item) { return {{item}, false}; }
  static RemovalRequest Batch(std::vector<RemovalItem> items) {
    return {std::move(items), true};
  }
  friend bool operator==(const RemovalRequest&, const RemovalRequest&) =
      default;
};

enum class RemovalKind { kEdge, kNode, kFeature, kBatch };
const char* RemovalKindName(RemovalKind kind);
RemovalKind KindOf(const RemovalItem& item);
RemovalKind KindOf(const RemovalRequest& request);

// Throws NotFoundError/RangeError when `item` cannot be applied to `data` in
// its current state.
void CheckApplicable(const Dataset& data, const RemovalItem& item);

// Dataset-level removals. Each validates first and leaves the dataset
// unchanged on error.
EdgeDelta RemoveEdge(Dataset& data, NodeId u, NodeId v);

// Removes all incident edges in ascending neighbor order, zeroes the feature
// row, drops u from training, then removes the self-loop. The returned deltas
// follow the same order, self-loop last.
std::vector<EdgeDelta> RemoveNode(Dataset& data, NodeId u);

// Zeroes the feature row of u and drops its label from training.
void ZeroFeature(Dataset& data, NodeId u);

}  // namespace gunlearn

#endif  // GUNLEARN_GRAPH_H_
