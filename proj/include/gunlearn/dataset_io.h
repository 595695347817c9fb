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

#ifndef GUNLEARN_DATASET_IO_H_
#define GUNLEARN_DATASET_IO_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "gunlearn/graph.h"

namespace gunlearn {

// Plain-text formats, all 0-indexed:
//   edges:    one "u v" per line, whitespace separated
//   features: CSV, row i = node i
//   labels:   one integer class per line
//   masks:    one of train/val/test per line
// Blank lines and lines starting with '#' are skipped in edge lists.

Graph ParseEdgeList(std::istream& in, NodeId num_nodes);
Graph LoadEdgeList(const std::string& path, NodeId num_nodes);
void WriteEdgeList(std::ostream& out,
                   const std::vector<std::pair<NodeId, NodeId>>& edges);

Eigen::MatrixXd ParseFeaturesCsv(std::istream& in);
std::vector<int> ParseLabels(std::istream& in);
std::vector<Split> ParseSplits(std::istream& in);

struct DatasetPaths {
  std::string edges;
  std::string features;
  std::string labels;
  std::string masks;
};

// Node count is taken from the feature rows.
Dataset LoadDataset(const DatasetPaths& paths);
void WriteDataset(const Dataset& data, const DatasetPaths& paths);

const char* SplitName(Split s);

}  // namespace gunlearn

#endif  // GUNLEARN_DATASET_IO_H_
