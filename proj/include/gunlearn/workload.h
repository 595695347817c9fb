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

#ifndef GUNLEARN_WORKLOAD_H_
#define GUNLEARN_WORKLOAD_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "gunlearn/engine.h"
#include "gunlearn/graph.h"

namespace gunlearn {

// Workload files are JSON lines, one request per line:
//   {"op":"edge","u":i,"v":j}  {"op":"node","u":i}  {"op":"feature","u":i}
//   {"op":"batch","items":[...]}   (items use the three single forms)
// Blank lines are skipped. Malformed lines throw ParseError with the line.
RemovalRequest ParseRequest(const std::string& line, std::size_t line_no = 0);
std::string FormatRequest(const RemovalRequest& request);
std::vector<RemovalRequest> ParseWorkload(std::istream& in);
std::vector<RemovalRequest> LoadWorkload(const std::string& path);
void WriteWorkload(std::ostream& out,
                   const std::vector<RemovalRequest>& requests);

enum class WorkloadKind {
  kRandomEdges,
  kVulnerableEdges,
  kAdversarialEdges,
  kRandomNodes,
  kRandomFeatures,
};

// Accepts random-edges, vulnerable-edges, adversarial-edges, random-nodes
// and random-features.
WorkloadKind ParseWorkloadKind(const std::string& name);
const char* WorkloadKindName(WorkloadKind kind);
bool IsEdgeWorkload(WorkloadKind kind);

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::kRandomEdges;
  std::size_t count = 0;       // removal items
  std::size_t batch_size = 1;  // items per request; 1 emits single requests
  std::uint64_t seed = 1;
  // Vulnerable edges: test nodes whose degree without the self-loop is
  // below this threshold.
  std::uint32_t degree_threshold = 6;
  // Adversarial edges: size of the sampled target set V_t.
  std::size_t target_pool = 2000;
};

struct GeneratedWorkload {
  std::vector<RemovalRequest> requests;
  // Adversarial only: the input edges plus the planted ones, and V_t.
  std::optional<std::vector<std::pair<NodeId, NodeId>>> augmented_edges;
  std::vector<NodeId> targets;
};

// Random nodes and features are drawn from live training nodes. Throws
// ShortfallError carrying the achievable count when too few items qualify.
GeneratedWorkload GenerateWorkload(const Dataset& data,
                                   const WorkloadSpec& spec);

// Copy of `data` whose graph carries `edges` instead of its own.
Dataset WithEdges(const Dataset& data,
                  const std::vector<std::pair<NodeId, NodeId>>& edges);

// One line of the report stream.
struct ReportRecord {
  std::size_t index = 0;  // request position, 0-based
  std::string kind;
  std::size_t items = 0;
  double total_ms = 0.0;
  double prop_ms = 0.0;
  bool retrained = false;
  double bound_data = 0.0;
  double bound_worst = 0.0;
  std::optional<double> residual_true;
  std::uint64_t pushes = 0;
  std::optional<double> accuracy;          // unlearned model, test split
  std::optional<double> accuracy_retrain;  // retrain baseline, test split
};

ReportRecord RecordFromStep(const StepReport& step, std::size_t index);
std::string FormatRecord(const ReportRecord& record);
// Throws ParseError naming the line and the missing or mistyped field.
ReportRecord ParseRecord(const std::string& line, std::size_t line_no);
std::vector<ReportRecord> ParseRecords(std::istream& in);

// kind,requests,items,mean_total_ms,mean_prop_ms,mean_pushes,retrains
void WriteSummaryCsv(std::ostream& out,
                     const std::vector<ReportRecord>& records);
// removed,accuracy,accuracy_retrain (cumulative removed items)
void WriteAccuracyCsv(std::ostream& out,
                      const std::vector<ReportRecord>& records);
// index,kind,residual_true,bound_data,bound_worst
void WriteBoundTraceCsv(std::ostream& out,
                        const std::vector<ReportRecord>& records);

}  // namespace gunlearn

#endif  // GUNLEARN_WORKLOAD_H_
