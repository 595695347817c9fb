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

#ifndef GUNLEARN_PROPAGATION_H_
#define GUNLEARN_PROPAGATION_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gunlearn/graph.h"

namespace gunlearn {

struct PropagationConfig {
  int levels = 2;               // L
  std::vector<double> weights;  // w_0 .. w_L
  double rmax = 0.0;

  // Throws ConfigError unless weights has L+1 entries with sum |w| <= 1 and
  // rmax >= 0.
  void Validate() const;

  // Weights (0, ..., 0, 1): the L-hop SGC filter.
  static PropagationConfig Sgc(int levels, double rmax);
};

// Approximate embeddings materialized from the reserves.
struct EmbeddingMatrix {
  Eigen::MatrixXd z;              // n x F, zero rows for removed nodes
  Eigen::VectorXd residual_sums;  // per column: sum over levels and nodes of r
};

// Divides every row by the largest row 2-norm so that all rows have norm at
// most one. A zero matrix is returned unchanged.
Eigen::MatrixXd NormalizeRows(const Eigen::MatrixXd& x);

// Lazy local Generalized-PageRank propagation. For every signal column the
// state keeps one reserve and one residue vector per level and maintains
//
//   q0(u) + r0(u) = sqrt(d(u)) x(u)
//   ql(u) + rl(u) = sum_{t in N(u)} q(l-1)(t) / d(t),   0 < l <= L
//
// for every live node. Removals patch the residues of the few nodes whose
// equations break and then push until every residue below level L is at most
// rmax in magnitude.
class PropagationState {
 public:
  // Scales column j of `features` by s_j = max(1, ||D^{1/2} X e_j||_1) on the
  // current graph (frozen afterwards), seeds r0 = D^{1/2} x and pushes.
  // `features` rows are expected to be normalized already.
  static PropagationState Init(const Graph& g, const Eigen::MatrixXd& features,
                               const PropagationConfig& config);

  // Pushes every pending residue with |r| > rmax, level by level, then folds
  // level L residues into the reserves.
  void BasicProp(const Graph& g);

  // `g` already reflects the removal; delta carries the old degrees.
  void ApplyEdgeRemoval(const Graph& g, const EdgeDelta& delta);
  void ApplyFeatureRemoval(const Graph& g, NodeId u);
  // `deltas` as returned by RemoveNode: incident edges, then the self-loop.
  void ApplyNodeRemoval(const Graph& g, NodeId u,
                        std::span<const EdgeDelta> deltas);
  // One combined update for many removals. `deltas` may mix plain edge
  // deltas with complete node-removal delta runs (self-loop deltas mark the
  // removed nodes); `zeroed_features` lists feature removals.
  void ApplyBatchRemoval(const Graph& g, std::span<const EdgeDelta> deltas,
                         std::span<const NodeId> zeroed_features = {});

  EmbeddingMatrix Materialize(const Graph& g) const;

  // Largest absolute violation of the invariant over live nodes, levels and
  // columns.
  double MaxInvariantViolation(const Graph& g) const;
  // Largest |r| over levels below L, and largest |r| at level L.
  double MaxResidueBelowTop() const;
  double MaxTopResidue() const;

  NodeId num_nodes() const { return num_nodes_; }
  int num_columns() const { return static_cast<int>(columns_.size()); }
  int levels() const { return config_.levels; }
  const PropagationConfig& config() const { return config_; }
  double rmax() const { return config_.rmax; }
  const std::vector<double>& weights() const { return config_.weights; }
  const std::vector<double>& scales() const { return scales_; }
  // Scaled signal x, one column per feature.
  const Eigen::MatrixXd& signal() const { return signal_; }
  std::span<const double> reserve(int column, int level) const;
  std::span<const double> residue(int column, int level) const;
  // Total push operations since initialization.
  std::uint64_t push_count() const;

  // Binary snapshot: header (n, F, L, weights, rmax, scales), the signal,
  // dense reserves and (level, node, value) residue triples per column.
  // Little-endian 64-bit floats.
  void Save(const std::string& path) const;
  static PropagationState Load(const std::string& path);

 private:
  struct Column {
    std::vector<double> reserve;  // (L+1) * n, level-major
    std::vector<double> residue;
    std::vector<std::vector<NodeId>> pending;  // per level
    std::vector<char> queued;                  // (L+1) * n
    std::uint64_t pushes = 0;
  };

  PropagationState() = default;

  std::size_t Index(int level, NodeId u) const {
    return static_cast<std::size_t>(level) * num_nodes_ + u;
  }
  void AddResidue(Column& c, int level, NodeId u, double amount) const;
  void SetResidue(Column& c, int level, NodeId u, double value) const;
  void Push(Column& c, const Graph& g) const;
  // Residue patch for one edge removal with explicit post-removal
  // neighborhoods (node removal replays intermediate states).
  void PatchEdge(Column& c, int column, NodeId u, NodeId v,
                 std::uint32_t new_degree_u, std::uint32_t new_degree_v,
                 std::span<const NodeId> nbrs_u,
                 std::span<const NodeId> nbrs_v) const;
  void ZeroNode(Column& c, NodeId u) const;
  void ForEachColumn(const std::function<void(Column&, int)>& fn);

  PropagationConfig config_;
  NodeId num_nodes_ = 0;
  std::vector<double> scales_;
  Eigen::MatrixXd signal_;
  std::vector<Column> columns_;
};

}  // namespace gunlearn

#endif  // GUNLEARN_PROPAGATION_H_
