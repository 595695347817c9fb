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

#ifndef GUNLEARN_SYNTHETIC_H_
#define GUNLEARN_SYNTHETIC_H_

#include <cstdint>
#include <string>

#include "gunlearn/graph.h"

namespace gunlearn {

enum class FeatureMode {
  kGaussian,  // class centroid plus isotropic noise
  kSparse,    // Bernoulli bag of words, denser on class topic columns
};

// Accepts "gaussian" and "sparse".
FeatureMode ParseFeatureMode(const std::string& name);

// Planted-partition graph with class-dependent features.
struct SyntheticConfig {
  NodeId num_nodes = 300;
  int num_classes = 3;
  int num_features = 16;
  double avg_degree = 6.0;
  double homophily = 0.8;  // probability that an edge stays inside a class
  FeatureMode mode = FeatureMode::kGaussian;
  double center_scale = 1.0;   // gaussian: centroid entries ~ N(0, scale^2)
  double noise = 1.0;          // gaussian: per-entry noise deviation
  double topic_rate = 0.3;     // sparse: P(x=1) on the class topic columns
  double background_rate = 0.03;
  double train_fraction = 0.6;
  double val_fraction = 0.1;
  std::uint64_t seed = 1;
};

// Labels are balanced up to rounding; splits are a seeded shuffle. Edge count
// is round(n * avg_degree / 2) before deduplication.
Dataset MakeSynthetic(const SyntheticConfig& config);

// Uniform random simple graph with `num_edges` distinct edges.
Graph RandomGraph(NodeId num_nodes, std::size_t num_edges,
                  std::uint64_t seed);

// Random d-regular simple graph by the pairing model with restarts. Requires
// n * d even and d < n.
Graph RandomRegularGraph(NodeId num_nodes, int degree, std::uint64_t seed);

}  // namespace gunlearn

#endif  // GUNLEARN_SYNTHETIC_H_
