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

#include "gunlearn/propagation.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>
#include <unordered_map>

#include "gunlearn/errors.h"
#include "gunlearn/parallel.h"

namespace gunlearn {
namespace {

constexpr double kWeightSlack = 1e-12;
constexpr std::uint64_t kSnapshotMagic = 0x50414750'4E554721ULL;  // "!GUNPGAP"

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

template <typename T>
void WritePod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T ReadPod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IoError("truncated propagation snapshot");
  return value;
}

}  // namespace

void PropagationConfig::Validate() const {
  if (levels < 0) throw ConfigError("propagation depth L must be >= 0");
  if (weights.size() != static_cast<std::size_t>(levels) + 1) {
    throw ConfigError("expected " + std::to_string(levels + 1) +
                      " propagation weights, got " +
                      std::to_string(weights.size()));
  }
  double total = 0.0;
  for (double w : weights) total += std::abs(w);
  if (total > 1.0 + kWeightSlack) {
    throw ConfigError("sum of |w_l| is " + std::to_string(total) +
                      ", must be <= 1");
  }
  if (!(rmax >= 0.0)) throw ConfigError("rmax must be >= 0");
}

PropagationConfig PropagationConfig::Sgc(int levels, double rmax) {
  PropagationConfig config;
  config.levels = levels;
  config.weights.assign(levels + 1, 0.0);
  config.weights.back() = 1.0;
  config.rmax = rmax;
  return config;
}

Eigen::MatrixXd NormalizeRows(const Eigen::MatrixXd& x) {
  if (x.size() == 0) return x;
  const double max_norm = x.rowwise().norm().maxCoeff();
  if (max_norm <= 0.0) return x;
  return x / max_norm;
}

PropagationState PropagationState::Init(const Graph& g,
                                        const Eigen::MatrixXd& features,
                                        const PropagationConfig& config) {
  config.Validate();
  if (features.rows() != g.num_nodes()) {
    throw ConfigError("feature matrix has " + std::to_string(features.rows()) +
                      " rows for a graph of " + std::to_string(g.num_nodes()) +
                      " nodes");
  }
  PropagationState s;
  s.config_ = config;
  s.num_nodes_ = g.num_nodes();
  const int f = static_cast<int>(features.cols());
  const NodeId n = s.num_nodes_;
  const int levels = config.levels;

  Eigen::VectorXd sqrt_degree(n);
  for (NodeId u = 0; u < n; ++u) sqrt_degree[u] = std::sqrt(g.degree(u));

  s.scales_.assign(f, 1.0);
  s.signal_ = features;
  for (NodeId u = 0; u < n; ++u) {
    if (!g.is_live(u)) s.signal_.row(u).setZero();
  }
  for (int j = 0; j < f; ++j) {
    const double mass = sqrt_degree.dot(s.signal_.col(j).cwiseAbs());
    s.scales_[j] = std::max(1.0, mass);
    s.signal_.col(j) /= s.scales_[j];
  }

  s.columns_.resize(f);
  const std::size_t cells = static_cast<std::size_t>(levels + 1) * n;
  for (int j = 0; j < f; ++j) {
    Column& c = s.columns_[j];
    c.reserve.assign(cells, 0.0);
    c.residue.assign(cells, 0.0);
    c.queued.assign(cells, 0);
    c.pending.assign(levels + 1, {});
    for (NodeId u = 0; u < n; ++u) {
      const double seed = sqrt_degree[u] * s.signal_(u, j);
      if (seed != 0.0) s.SetResidue(c, 0, u, seed);
    }
  }
  s.BasicProp(g);
  return s;
}

void PropagationState::AddResidue(Column& c, int level, NodeId u,
                                  double amount) const {
  const std::size_t i = Index(level, u);
  c.residue[i] += amount;
  if (!c.queued[i]) {
    c.queued[i] = 1;
    c.pending[level].push_back(u);
  }
}

void PropagationState::SetResidue(Column& c, int level, NodeId u,
                                  double value) const {
  const std::size_t i = Index(level, u);
  c.residue[i] = value;
  if (!c.queued[i]) {
    c.queued[i] = 1;
    c.pending[level].push_back(u);
  }
}

void PropagationState::Push(Column& c, const Graph& g) const {
  const int top = config_.levels;
  const double rmax = config_.rmax;
  for (int level = 0; level < top; ++level) {
    // Pushes only feed level + 1, so this level's queue is stable.
    std::vector<NodeId> queue;
    queue.swap(c.pending[level]);
    for (NodeId u : queue) {
      const std::size_t i = Index(level, u);
      c.queued[i] = 0;
      const double r = c.residue[i];
      if (!(std::abs(r) > rmax)) continue;
      const double share = r / g.degree(u);
      for (NodeId v : g.neighbors(u)) AddResidue(c, level + 1, v, share);
      c.reserve[i] += r;
      c.residue[i] = 0.0;
      ++c.pushes;
    }
  }
  for (NodeId u : c.pending[top]) {
    const std::size_t i = Index(top, u);
    c.queued[i] = 0;
    c.reserve[i] += c.residue[i];
    c.residue[i] = 0.0;
  }
  c.pending[top].clear();
}

void PropagationState::ForEachColumn(
    const std::function<void(Column&, int)>& fn) {
  ParallelFor(columns_.size(),
              [&](std::size_t j) { fn(columns_[j], static_cast<int>(j)); });
}

void PropagationState::BasicProp(const Graph& g) {
  ForEachColumn([&](Column& c, int) { Push(c, g); });
}

void PropagationState::PatchEdge(Column& c, int column, NodeId u, NodeId v,
                                 std::uint32_t new_degree_u,
                                 std::uint32_t new_degree_v,
                                 std::span<const NodeId> nbrs_u,
                                 std::span<const NodeId> nbrs_v) const {
  const double du = new_degree_u;
  const double dv = new_degree_v;
  const double xu = signal_(u, column);
  const double xv = signal_(v, column);
  if (xu != 0.0) AddResidue(c, 0, u, (std::sqrt(du) - std::sqrt(du + 1)) * xu);
  if (xv != 0.0) AddResidue(c, 0, v, (std::sqrt(dv) - std::sqrt(dv + 1)) * xv);
  for (int level = 1; level <= config_.levels; ++level) {
    const double qu = c.reserve[Index(level - 1, u)];
    const double qv = c.reserve[Index(level - 1, v)];
    if (qv != 0.0) AddResidue(c, level, u, -qv / (dv + 1));
    if (qu != 0.0) {
      const double spread = qu / (du * (du + 1));
      for (NodeId w : nbrs_u) AddResidue(c, level, w, spread);
      AddResidue(c, level, v, -qu / (du + 1));
    }
    if (qv != 0.0) {
      const double spread = qv / (dv * (dv + 1));
      for (NodeId w : nbrs_v) AddResidue(c, level, w, spread);
    }
  }
}

void PropagationState::ApplyEdgeRemoval(const Graph& g,
                                        const EdgeDelta& delta) {
  if (delta.is_self_loop()) {
    throw ConfigError("ApplyEdgeRemoval needs a non-self-loop delta");
  }
  const NodeId u = delta.u;
  const NodeId v = delta.v;
  if (g.HasEdge(u, v) || g.degree(u) + 1 != delta.old_degree_u ||
      g.degree(v) + 1 != delta.old_degree_v) {
    throw ConfigError("graph does not reflect the edge removal delta");
  }
  ForEachColumn([&](Column& c, int j) {
    PatchEdge(c, j, u, v, g.degree(u), g.degree(v), g.neighbors(u),
              g.neighbors(v));
    Push(c, g);
  });
}

void PropagationState::ApplyFeatureRemoval(const Graph& g, NodeId u) {
  signal_.row(u).setZero();
  ForEachColumn([&](Column& c, int) {
    const double q0 = c.reserve[Index(0, u)];
    if (q0 != 0.0 || c.residue[Index(0, u)] != 0.0) SetResidue(c, 0, u, -q0);
    Push(c, g);
  });
}

void PropagationState::ZeroNode(Column& c, NodeId u) const {
  for (int level = 0; level <= config_.levels; ++level) {
    c.reserve[Index(level, u)] = 0.0;
    c.residue[Index(level, u)] = 0.0;
  }
}

void PropagationState::ApplyNodeRemoval(const Graph& g, NodeId u,
                                        std::span<const EdgeDelta> deltas) {
  if (g.is_live(u)) throw ConfigError("node removal delta for a live node");
  std::vector<EdgeDelta> edges;
  for (const EdgeDelta& d : deltas) {
    if (d.is_self_loop()) continue;
    if (d.u != u) throw ConfigError("node removal delta not incident to u");
    edges.push_back(d);
  }
  ForEachColumn([&](Column& c, int j) {
    // Replays the removals in order; after removing edge k, u still sees the
    // endpoints of edges k+1.. plus itself.
    std::vector<NodeId> remaining;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      remaining.assign(1, u);
      for (std::size_t t = k + 1; t < edges.size(); ++t) {
        remaining.push_back(edges[t].v);
      }
      const EdgeDelta& d = edges[k];
      PatchEdge(c, j, u, d.v, d.old_degree_u - 1, d.old_degree_v - 1,
                remaining, g.neighbors(d.v));
    }
    ZeroNode(c, u);
  });
  signal_.row(u).setZero();
  BasicProp(g);
}

void PropagationState::ApplyBatchRemoval(
    const Graph& g, std::span<const EdgeDelta> deltas,
    std::span<const NodeId> zeroed_features) {
  std::vector<NodeId> dead;
  std::unordered_map<NodeId, std::vector<NodeId>> removed;  // node -> nbrs
  std::vector<NodeId> affected;
  for (const EdgeDelta& d : deltas) {
    if (d.is_self_loop()) {
      dead.push_back(d.u);
      continue;
    }
    for (auto [a, b] : {std::pair{d.u, d.v}, std::pair{d.v, d.u}}) {
      auto [it, inserted] = removed.try_emplace(a);
      if (inserted) affected.push_back(a);
      it->second.push_back(b);
    }
  }
  // A removed node keeps a virtual self-loop until it is zeroed below.
  auto degree = [&](NodeId u) -> double {
    return g.is_live(u) ? g.degree(u) : 1.0;
  };
  const int top = config_.levels;
  ForEachColumn([&](Column& c, int j) {
    for (NodeId u : affected) {
      const double d = degree(u);
      const double ratio = d / (d + removed[u].size());
      double& q0 = c.reserve[Index(0, u)];
      q0 *= ratio;
      SetResidue(c, 0, u, std::sqrt(d) * signal_(u, j) - q0);
    }
    for (int level = 1; level <= top; ++level) {
      for (NodeId u : affected) {
        const auto& gone = removed[u];
        const double d = degree(u);
        const double delta = static_cast<double>(gone.size());
        double& q = c.reserve[Index(level, u)];
        q *= d / (d + delta);
        double patch = (delta / d) * q;
        for (NodeId v : gone) {
          patch -= c.reserve[Index(level - 1, v)] / degree(v);
        }
        AddResidue(c, level, u, patch);
      }
    }
    for (NodeId u : zeroed_features) {
      SetResidue(c, 0, u, -c.reserve[Index(0, u)]);
    }
    for (NodeId u : dead) ZeroNode(c, u);
  });
  for (NodeId u : zeroed_features) signal_.row(u).setZero();
  for (NodeId u : dead) signal_.row(u).setZero();
  BasicProp(g);
}

EmbeddingMatrix PropagationState::Materialize(const Graph& g) const {
  const NodeId n = num_nodes_;
  const int f = num_columns();
  EmbeddingMatrix out;
  out.z = Eigen::MatrixXd::Zero(n, f);
  out.residual_sums = Eigen::VectorXd::Zero(f);
  std::vector<double> inv_sqrt(n, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    if (g.is_live(u)) inv_sqrt[u] = 1.0 / std::sqrt(g.degree(u));
  }
  for (int j = 0; j < f; ++j) {
    const Column& c = columns_[j];
    auto col = out.z.col(j);
    for (int level = 0; level <= config_.levels; ++level) {
      const double w = config_.weights[level];
      const double* q = c.reserve.data() + Index(level, 0);
      if (w != 0.0) {
        for (NodeId u = 0; u < n; ++u) col[u] += w * inv_sqrt[u] * q[u];
      }
    }
    out.residual_sums[j] =
        std::accumulate(c.residue.begin(), c.residue.end(), 0.0);
  }
  return out;
}

double PropagationState::MaxInvariantViolation(const Graph& g) const {
  double worst = 0.0;
  const NodeId n = num_nodes_;
  for (int j = 0; j < num_columns(); ++j) {
    const Column& c = columns_[j];
    for (NodeId u = 0; u < n; ++u) {
      if (!g.is_live(u)) continue;
      const double lhs0 = c.reserve[Index(0, u)] + c.residue[Index(0, u)];
      worst = std::max(
          worst, std::abs(lhs0 - std::sqrt(g.degree(u)) * signal_(u, j)));
      for (int level = 1; level <= config_.levels; ++level) {
        double rhs = 0.0;
        for (NodeId t : g.neighbors(u)) {
          rhs += c.reserve[Index(level - 1, t)] / g.degree(t);
        }
        const double lhs =
            c.reserve[Index(level, u)] + c.residue[Index(level, u)];
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  return worst;
}

double PropagationState::MaxResidueBelowTop() const {
  double worst = 0.0;
  const std::size_t below = Index(config_.levels, 0);
  for (const Column& c : columns_) {
    for (std::size_t i = 0; i < below; ++i) {
      worst = std::max(worst, std::abs(c.residue[i]));
    }
  }
  return worst;
}

double PropagationState::MaxTopResidue() const {
  double worst = 0.0;
  const std::size_t top = Index(config_.levels, 0);
  for (const Column& c : columns_) {
    for (std::size_t i = top; i < c.residue.size(); ++i) {
      worst = std::max(worst, std::abs(c.residue[i]));
    }
  }
  return worst;
}

std::span<const double> PropagationState::reserve(int column,
                                                  int level) const {
  return std::span<const double>(columns_.at(column).reserve)
      .subspan(Index(level, 0), num_nodes_);
}

std::span<const double> PropagationState::residue(int column,
                                                  int level) const {
  return std::span<const double>(columns_.at(column).residue)
      .subspan(Index(level, 0), num_nodes_);
}

std::uint64_t PropagationState::push_count() const {
  std::uint64_t total = 0;
  for (const Column& c : columns_) total += c.pushes;
  return total;
}

void PropagationState::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const std::uint64_t n = num_nodes_;
  const std::uint64_t f = columns_.size();
  const std::uint64_t levels = config_.levels;
  WritePod(out, kSnapshotMagic);
  WritePod(out, n);
  WritePod(out, f);
  WritePod(out, levels);
  for (double w : config_.weights) WritePod(out, w);
  WritePod(out, config_.rmax);
  for (double s : scales_) WritePod(out, s);
  for (std::uint64_t j = 0; j < f; ++j) {
    out.write(reinterpret_cast<const char*>(signal_.col(j).data()),
              static_cast<std::streamsize>(n * sizeof(double)));
  }
  for (const Column& c : columns_) {
    WritePod(out, c.pushes);
    out.write(reinterpret_cast<const char*>(c.reserve.data()),
              static_cast<std::streamsize>(c.reserve.size() * sizeof(double)));
    std::uint64_t nonzero = 0;
    for (double r : c.residue) nonzero += (r != 0.0);
    WritePod(out, nonzero);
    for (std::uint64_t level = 0; level <= levels; ++level) {
      for (std::uint64_t u = 0; u < n; ++u) {
        const double r = c.residue[level * n + u];
        if (r == 0.0) continue;
        WritePod(out, level);
        WritePod(out, u);
        WritePod(out, r);
      }
    }
  }
  if (!out) throw IoError("failed writing " + path);
}

PropagationState PropagationState::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  if (ReadPod<std::uint64_t>(in) != kSnapshotMagic) {
    throw ParseError(path + ": not a propagation snapshot", 0);
  }
  PropagationState s;
  const auto n = ReadPod<std::uint64_t>(in);
  const auto f = ReadPod<std::uint64_t>(in);
  const auto levels = ReadPod<std::uint64_t>(in);
  s.num_nodes_ = static_cast<NodeId>(n);
  s.config_.levels = static_cast<int>(levels);
  s.config_.weights.resize(levels + 1);
  for (double& w : s.config_.weights) w = ReadPod<double>(in);
  s.config_.rmax = ReadPod<double>(in);
  s.config_.Validate();
  s.scales_.resize(f);
  for (double& v : s.scales_) v = ReadPod<double>(in);
  s.signal_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(f));
  for (std::uint64_t j = 0; j < f; ++j) {
    in.read(reinterpret_cast<char*>(s.signal_.col(j).data()),
            static_cast<std::streamsize>(n * sizeof(double)));
  }
  const std::size_t cells = (levels + 1) * n;
  s.columns_.resize(f);
  for (Column& c : s.columns_) {
    c.pushes = ReadPod<std::uint64_t>(in);
    c.reserve.resize(cells);
    in.read(reinterpret_cast<char*>(c.reserve.data()),
            static_cast<std::streamsize>(cells * sizeof(double)));
    c.residue.assign(cells, 0.0);
    c.queued.assign(cells, 0);
    c.pending.assign(levels + 1, {});
    const auto nonzero = ReadPod<std::uint64_t>(in);
    for (std::uint64_t k = 0; k < nonzero; ++k) {
      const auto level = ReadPod<std::uint64_t>(in);
      const auto u = ReadPod<std::uint64_t>(in);
      const auto r = ReadPod<double>(in);
      if (level > levels || u >= n) {
        throw ParseError(path + ": residue triple out of range", 0);
      }
      c.residue[level * n + u] = r;
    }
  }
  if (!in) throw IoError("truncated propagation snapshot " + path);
  return s;
}

}  // namespace gunlearn
