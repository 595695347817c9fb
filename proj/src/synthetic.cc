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

#include "gunlearn/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "gunlearn/errors.h"

namespace gunlearn {
namespace {

constexpr int kMaxRegularAttempts = 1000;

using EdgeSet = std::set<std::pair<NodeId, NodeId>>;

bool Insert(EdgeSet& edges, NodeId u, NodeId v) {
  if (u == v) return false;
  return edges.emplace(std::min(u, v), std::max(u, v)).second;
}

Graph FromSet(NodeId n, const EdgeSet& edges) {
  const std::vector<std::pair<NodeId, NodeId>> list(edges.begin(),
                                                    edges.end());
  return Graph::FromEdges(n, list);
}

}  // namespace

FeatureMode ParseFeatureMode(const std::string& name) {
  if (name == "gaussian") return FeatureMode::kGaussian;
  if (name == "sparse") return FeatureMode::kSparse;
  throw ConfigError("unknown feature mode '" + name +
                    "' (expected gaussian or sparse)");
}

Dataset MakeSynthetic(const SyntheticConfig& config) {
  const NodeId n = config.num_nodes;
  const int classes = config.num_classes;
  const int f = config.num_features;
  if (n < 2 || classes < 1 || f < 1) {
    throw ConfigError("synthetic graph needs n >= 2, classes >= 1, F >= 1");
  }
  if (config.train_fraction < 0 || config.val_fraction < 0 ||
      config.train_fraction + config.val_fraction > 1.0) {
    throw ConfigError("split fractions must be >= 0 and sum to <= 1");
  }
  std::mt19937_64 rng(config.seed);

  std::vector<int> labels(n);
  for (NodeId u = 0; u < n; ++u) labels[u] = static_cast<int>(u % classes);
  std::shuffle(labels.begin(), labels.end(), rng);
  std::vector<std::vector<NodeId>> members(classes);
  for (NodeId u = 0; u < n; ++u) members[labels[u]].push_back(u);

  EdgeSet edges;
  const auto target = static_cast<std::size_t>(
      std::llround(config.avg_degree * n / 2.0));
  std::uniform_int_distribution<NodeId> any(0, n - 1);
  std::bernoulli_distribution inside(config.homophily);
  for (std::size_t k = 0; k < target; ++k) {
    const NodeId u = any(rng);
    NodeId v = u;
    const auto& own = members[labels[u]];
    if (inside(rng) && own.size() > 1) {
      std::uniform_int_distribution<std::size_t> pick(0, own.size() - 1);
      v = own[pick(rng)];
    } else {
      v = any(rng);
      if (classes > 1) {
        while (labels[v] == labels[u]) v = any(rng);
      }
    }
    Insert(edges, u, v);
  }

  Eigen::MatrixXd x(n, f);
  if (config.mode == FeatureMode::kGaussian) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd centers(classes, f);
    for (int c = 0; c < classes; ++c) {
      for (int j = 0; j < f; ++j) centers(c, j) = config.center_scale * normal(rng);
    }
    for (NodeId u = 0; u < n; ++u) {
      for (int j = 0; j < f; ++j) {
        x(u, j) = centers(labels[u], j) + config.noise * normal(rng);
      }
    }
  } else {
    std::bernoulli_distribution topic(config.topic_rate);
    std::bernoulli_distribution background(config.background_rate);
    for (NodeId u = 0; u < n; ++u) {
      for (int j = 0; j < f; ++j) {
        const bool on_topic = j % classes == labels[u];
        x(u, j) = (on_topic ? topic(rng) : background(rng)) ? 1.0 : 0.0;
      }
    }
  }

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto num_train = static_cast<std::size_t>(config.train_fraction * n);
  const auto num_val = static_cast<std::size_t>(config.val_fraction * n);
  std::vector<Split> split(n, Split::kTest);
  for (std::size_t i = 0; i < num_train + num_val; ++i) {
    split[order[i]] = i < num_train ? Split::kTrain : Split::kVal;
  }

  Dataset data;
  data.graph = FromSet(n, edges);
  data.store.features = std::move(x);
  data.store.labels = std::move(labels);
  data.store.split = std::move(split);
  data.store.ResetTrainMask();
  data.num_classes = classes;
  data.Validate();
  return data;
}

Graph RandomGraph(NodeId num_nodes, std::size_t num_edges,
                  std::uint64_t seed) {
  const double pairs = 0.5 * num_nodes * (num_nodes - 1.0);
  if (num_nodes < 2 || static_cast<double>(num_edges) > pairs) {
    throw ConfigError("cannot place that many edges on " +
                      std::to_string(num_nodes) + " nodes");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeId> any(0, num_nodes - 1);
  EdgeSet edges;
  while (edges.size() < num_edges) Insert(edges, any(rng), any(rng));
  return FromSet(num_nodes, edges);
}

Graph RandomRegularGraph(NodeId num_nodes, int degree, std::uint64_t seed) {
  if (degree < 0 || static_cast<NodeId>(degree) >= num_nodes ||
      (static_cast<std::uint64_t>(num_nodes) * degree) % 2 != 0) {
    throw ConfigError("no simple " + std::to_string(degree) +
                      "-regular graph on " + std::to_string(num_nodes) +
                      " nodes");
  }
  std::mt19937_64 rng(seed);
  const std::size_t total = static_cast<std::size_t>(num_nodes) * degree;
  for (int attempt = 0; attempt < kMaxRegularAttempts; ++attempt) {
    // Pairs random free stubs, rejecting loops and repeats; restarts when
    // the remaining stubs admit no valid pair.
    std::vector<NodeId> stubs;
    stubs.reserve(total);
    for (NodeId u = 0; u < num_nodes; ++u) stubs.insert(stubs.end(), degree, u);
    EdgeSet edges;
    std::size_t misses = 0;
    while (!stubs.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, stubs.size() - 1);
      std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      if (i != j && Insert(edges, stubs[i], stubs[j])) {
        if (i < j) std::swap(i, j);
        stubs[i] = stubs.back();
        stubs.pop_back();
        stubs[j] = stubs.back();
        stubs.pop_back();
        misses = 0;
      } else if (++misses > 64 * stubs.size() + 64) {
        break;
      }
    }
    if (stubs.empty()) return FromSet(num_nodes, edges);
  }
  throw ConfigError("pairing model failed to produce a simple graph");
}

}  // namespace gunlearn
