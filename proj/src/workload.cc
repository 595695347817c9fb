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

#include "gunlearn/workload.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "gunlearn/errors.h"
#include "json.hpp"

namespace gunlearn {
namespace {

using nlohmann::json;

// Adversarial sampling gives up after this many draws per requested edge.
constexpr std::size_t kDrawsPerEdge = 10000;

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

json ParseJson(const std::string& line, std::size_t line_no) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
  }
}

NodeId NodeField(const json& j, const char* key, std::size_t line_no) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number_unsigned() ||
      it->get<std::uint64_t>() > std::numeric_limits<NodeId>::max()) {
    throw ParseError(std::string("field '") + key +
                         "' must be a non-negative integer node id",
                     line_no);
  }
  return it->get<NodeId>();
}

std::string OpField(const json& j, std::size_t line_no) {
  if (!j.is_object()) throw ParseError("request must be a JSON object", line_no);
  const auto it = j.find("op");
  if (it == j.end() || !it->is_string()) {
    throw ParseError("missing string field 'op'", line_no);
  }
  return it->get<std::string>();
}

RemovalItem ParseItem(const json& j, std::size_t line_no) {
  const std::string op = OpField(j, line_no);
  if (op == "edge") {
    return EdgeRemoval{NodeField(j, "u", line_no), NodeField(j, "v", line_no)};
  }
  if (op == "node") return NodeRemoval{NodeField(j, "u", line_no)};
  if (op == "feature") return FeatureRemoval{NodeField(j, "u", line_no)};
  throw ParseError("unknown op '" + op + "'", line_no);
}

json ItemJson(const RemovalItem& item) {
  if (const auto* e = std::get_if<EdgeRemoval>(&item)) {
    return {{"op", "edge"}, {"u", e->u}, {"v", e->v}};
  }
  if (const auto* r = std::get_if<NodeRemoval>(&item)) {
    return {{"op", "node"}, {"u", r->u}};
  }
  return {{"op", "feature"}, {"u", std::get<FeatureRemoval>(item).u}};
}

std::vector<RemovalRequest> Chunk(std::vector<RemovalItem> items,
                                  std::size_t batch_size) {
  std::vector<RemovalRequest> out;
  if (batch_size <= 1) {
    for (auto& item : items) out.push_back(RemovalRequest::Single(item));
    return out;
  }
  for (std::size_t i = 0; i < items.size(); i += batch_size) {
    const std::size_t end = std::min(items.size(), i + batch_size);
    out.push_back(RemovalRequest::Batch(
        {items.begin() + static_cast<std::ptrdiff_t>(i),
         items.begin() + static_cast<std::ptrdiff_t>(end)}));
  }
  return out;
}

void Shortfall(const char* what, std::size_t achievable, std::size_t wanted) {
  throw ShortfallError(std::string("only ") + std::to_string(achievable) +
                           " qualifying " + what + " for " +
                           std::to_string(wanted) + " requested",
                       achievable);
}

std::vector<RemovalItem> RandomEdges(const Dataset& data, std::size_t count,
                                     std::mt19937_64& rng) {
  auto edges = data.graph.Edges();
  if (edges.size() < count) Shortfall("edges", edges.size(), count);
  std::shuffle(edges.begin(), edges.end(), rng);
  std::vector<RemovalItem> items;
  for (std::size_t i = 0; i < count; ++i) {
    items.push_back(EdgeRemoval{edges[i].first, edges[i].second});
  }
  return items;
}

std::vector<RemovalItem> VulnerableEdges(const Dataset& data,
                                         const WorkloadSpec& spec,
                                         std::mt19937_64& rng) {
  const Graph& g = data.graph;
  std::vector<NodeId> low;
  for (NodeId v : data.NodesInSplit(Split::kTest)) {
    if (g.degree(v) - 1 < spec.degree_threshold) low.push_back(v);
  }
  std::shuffle(low.begin(), low.end(), rng);
  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<RemovalItem> items;
  for (NodeId v : low) {
    for (NodeId w : g.neighbors(v)) {
      if (items.size() == spec.count) return items;
      if (w == v || data.store.labels[w] != data.store.labels[v]) continue;
      if (seen.emplace(std::min(v, w), std::max(v, w)).second) {
        items.push_back(EdgeRemoval{v, w});
      }
    }
  }
  if (items.size() < spec.count) Shortfall("edges", items.size(), spec.count);
  return items;
}

std::vector<RemovalItem> RandomTrainNodes(const Dataset& data,
                                          std::size_t count, bool feature,
                                          std::mt19937_64& rng) {
  auto nodes = data.TrainRows();
  if (nodes.size() < count) Shortfall("training nodes", nodes.size(), count);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  std::vector<RemovalItem> items;
  for (std::size_t i = 0; i < count; ++i) {
    if (feature) {
      items.push_back(FeatureRemoval{nodes[i]});
    } else {
      items.push_back(NodeRemoval{nodes[i]});
    }
  }
  return items;
}

GeneratedWorkload AdversarialEdges(const Dataset& data,
                                   const WorkloadSpec& spec,
                                   std::mt19937_64& rng) {
  GeneratedWorkload out;
  auto pool = data.NodesInSplit(Split::kTest);
  std::shuffle(pool.begin(), pool.end(), rng);
  if (pool.size() > spec.target_pool) pool.resize(spec.target_pool);
  std::vector<NodeId> live;
  for (NodeId u = 0; u < data.num_nodes(); ++u) {
    if (data.graph.is_live(u)) live.push_back(u);
  }
  std::set<std::pair<NodeId, NodeId>> planted;
  std::vector<RemovalItem> items;
  if (spec.count > 0 && (pool.empty() || live.empty())) {
    Shortfall("edges", 0, spec.count);
  }
  const std::size_t max_draws = kDrawsPerEdge * (spec.count + 1);
  for (std::size_t draw = 0; items.size() < spec.count; ++draw) {
    if (draw == max_draws) Shortfall("edges", items.size(), spec.count);
    std::uniform_int_distribution<std::size_t> pick_u(0, pool.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_v(0, live.size() - 1);
    const NodeId u = pool[pick_u(rng)];
    const NodeId v = live[pick_v(rng)];
    if (data.store.labels[u] == data.store.labels[v] ||
        data.graph.HasEdge(u, v)) {
      continue;
    }
    if (planted.emplace(std::min(u, v), std::max(u, v)).second) {
      items.push_back(EdgeRemoval{u, v});
    }
  }
  auto edges = data.graph.Edges();
  edges.insert(edges.end(), planted.begin(), planted.end());
  std::sort(edges.begin(), edges.end());
  out.augmented_edges = std::move(edges);
  std::sort(pool.begin(), pool.end());
  out.targets = std::move(pool);
  out.requests = Chunk(std::move(items), spec.batch_size);
  return out;
}

const json& Require(const json& j, const char* key, std::size_t line_no) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(std::string("missing field '") + key + "'", line_no);
  }
  return *it;
}

double NumberField(const json& j, const char* key, std::size_t line_no) {
  const json& v = Require(j, key, line_no);
  if (!v.is_number()) {
    throw ParseError(std::string("field '") + key + "' must be a number",
                     line_no);
  }
  return v.get<double>();
}

std::optional<double> OptionalNumber(const json& j, const char* key,
                                     std::size_t line_no) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) {
    throw ParseError(std::string("field '") + key + "' must be a number",
                     line_no);
  }
  return it->get<double>();
}

json NumberOrNull(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string Cell(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream s;
  s << std::setprecision(10) << *v;
  return s.str();
}

}  // namespace

RemovalRequest ParseRequest(const std::string& line, std::size_t line_no) {
  const json j = ParseJson(line, line_no);
  const std::string op = OpField(j, line_no);
  if (op != "batch") return RemovalRequest::Single(ParseItem(j, line_no));
  const auto it = j.find("items");
  if (it == j.end() || !it->is_array()) {
    throw ParseError("batch needs an 'items' array", line_no);
  }
  std::vector<RemovalItem> items;
  for (const json& item : *it) items.push_back(ParseItem(item, line_no));
  return RemovalRequest::Batch(std::move(items));
}

std::string FormatRequest(const RemovalRequest& request) {
  if (!request.batch && request.items.size() == 1) {
    return ItemJson(request.items.front()).dump();
  }
  json items = json::array();
  for (const auto& item : request.items) items.push_back(ItemJson(item));
  return json{{"op", "batch"}, {"items", items}}.dump();
}

std::vector<RemovalRequest> ParseWorkload(std::istream& in) {
  std::vector<RemovalRequest> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    out.push_back(ParseRequest(line, line_no));
  }
  return out;
}

std::vector<RemovalRequest> LoadWorkload(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");
  try {
    return ParseWorkload(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
}

void WriteWorkload(std::ostream& out,
                   const std::vector<RemovalRequest>& requests) {
  for (const auto& r : requests) out << FormatRequest(r) << '\n';
}

WorkloadKind ParseWorkloadKind(const std::string& name) {
  static const std::map<std::string, WorkloadKind> kNames = {
      {"random-edges", WorkloadKind::kRandomEdges},
      {"vulnerable-edges", WorkloadKind::kVulnerableEdges},
      {"adversarial-edges", WorkloadKind::kAdversarialEdges},
      {"random-nodes", WorkloadKind::kRandomNodes},
      {"random-features", WorkloadKind::kRandomFeatures},
  };
  const auto it = kNames.find(name);
  if (it == kNames.end()) throw ConfigError("unknown workload kind '" + name + "'");
  return it->second;
}

const char* WorkloadKindName(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::kRandomEdges:
      return "random-edges";
    case WorkloadKind::kVulnerableEdges:
      return "vulnerable-edges";
    case WorkloadKind::kAdversarialEdges:
      return "adversarial-edges";
    case WorkloadKind::kRandomNodes:
      return "random-nodes";
    case WorkloadKind::kRandomFeatures:
      return "random-features";
  }
  return "unknown";
}

bool IsEdgeWorkload(WorkloadKind kind) {
  return kind == WorkloadKind::kRandomEdges ||
         kind == WorkloadKind::kVulnerableEdges ||
         kind == WorkloadKind::kAdversarialEdges;
}

GeneratedWorkload GenerateWorkload(const Dataset& data,
                                   const WorkloadSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  if (spec.kind == WorkloadKind::kAdversarialEdges) {
    return AdversarialEdges(data, spec, rng);
  }
  std::vector<RemovalItem> items;
  switch (spec.kind) {
    case WorkloadKind::kRandomEdges:
      items = RandomEdges(data, spec.count, rng);
      break;
    case WorkloadKind::kVulnerableEdges:
      items = VulnerableEdges(data, spec, rng);
      break;
    case WorkloadKind::kRandomNodes:
      items = RandomTrainNodes(data, spec.count, false, rng);
      break;
    case WorkloadKind::kRandomFeatures:
      items = RandomTrainNodes(data, spec.count, true, rng);
      break;
    case WorkloadKind::kAdversarialEdges:
      break;
  }
  GeneratedWorkload out;
  out.requests = Chunk(std::move(items), spec.batch_size);
  return out;
}

Dataset WithEdges(const Dataset& data,
                  const std::vector<std::pair<NodeId, NodeId>>& edges) {
  Dataset out = data;
  out.graph = Graph::FromEdges(data.num_nodes(), edges);
  return out;
}

ReportRecord RecordFromStep(const StepReport& step, std::size_t index) {
  ReportRecord r;
  r.index = index;
  r.kind = RemovalKindName(step.kind);
  r.items = step.items;
  r.total_ms = step.total_ms;
  r.prop_ms = step.prop_ms;
  r.retrained = step.retrained;
  r.bound_data = step.bound_data;
  r.bound_worst = step.bound_worst;
  r.residual_true = step.residual_true;
  r.pushes = step.pushes;
  return r;
}

std::string FormatRecord(const ReportRecord& r) {
  json j = {{"index", r.index},
            {"kind", r.kind},
            {"items", r.items},
            {"total_ms", r.total_ms},
            {"prop_ms", r.prop_ms},
            {"retrained", r.retrained},
            {"bound_data", r.bound_data},
            {"bound_worst", r.bound_worst},
            {"residual_true", NumberOrNull(r.residual_true)},
            {"pushes", r.pushes},
            {"accuracy", NumberOrNull(r.accuracy)},
            {"accuracy_retrain", NumberOrNull(r.accuracy_retrain)}};
  return j.dump();
}

ReportRecord ParseRecord(const std::string& line, std::size_t line_no) {
  const json j = ParseJson(line, line_no);
  if (!j.is_object()) throw ParseError("report must be a JSON object", line_no);
  ReportRecord r;
  const json& kind = Require(j, "kind", line_no);
  if (!kind.is_string()) throw ParseError("field 'kind' must be a string", line_no);
  r.kind = kind.get<std::string>();
  const json& retrained = Require(j, "retrained", line_no);
  if (!retrained.is_boolean()) {
    throw ParseError("field 'retrained' must be a boolean", line_no);
  }
  r.retrained = retrained.get<bool>();
  r.total_ms = NumberField(j, "total_ms", line_no);
  r.prop_ms = NumberField(j, "prop_ms", line_no);
  // Unbounded values are serialized as null.
  Require(j, "bound_data", line_no);
  Require(j, "bound_worst", line_no);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  r.bound_data = OptionalNumber(j, "bound_data", line_no).value_or(kInf);
  r.bound_worst = OptionalNumber(j, "bound_worst", line_no).value_or(kInf);
  r.residual_true = OptionalNumber(j, "residual_true", line_no);
  r.accuracy = OptionalNumber(j, "accuracy", line_no);
  r.accuracy_retrain = OptionalNumber(j, "accuracy_retrain", line_no);
  r.index = static_cast<std::size_t>(
      OptionalNumber(j, "index", line_no).value_or(line_no - 1));
  r.items = static_cast<std::size_t>(
      OptionalNumber(j, "items", line_no).value_or(1));
  r.pushes = static_cast<std::uint64_t>(
      OptionalNumber(j, "pushes", line_no).value_or(0));
  return r;
}

std::vector<ReportRecord> ParseRecords(std::istream& in) {
  std::vector<ReportRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    out.push_back(ParseRecord(line, line_no));
  }
  return out;
}

void WriteSummaryCsv(std::ostream& out,
                     const std::vector<ReportRecord>& records) {
  struct Group {
    std::size_t requests = 0, items = 0, retrains = 0;
    double total = 0, prop = 0, pushes = 0;
  };
  std::map<std::string, Group> groups;
  for (const auto& r : records) {
    Group& g = groups[r.kind];
    ++g.requests;
    g.items += r.items;
    g.retrains += r.retrained;
    g.total += r.total_ms;
    g.prop += r.prop_ms;
    g.pushes += static_cast<double>(r.pushes);
  }
  out << "kind,requests,items,mean_total_ms,mean_prop_ms,mean_pushes,retrains\n";
  out << std::setprecision(10);
  for (const auto& [kind, g] : groups) {
    const double k = static_cast<double>(g.requests);
    out << kind << ',' << g.requests << ',' << g.items << ',' << g.total / k
        << ',' << g.prop / k << ',' << g.pushes / k << ',' << g.retrains
        << '\n';
  }
}

void WriteAccuracyCsv(std::ostream& out,
                      const std::vector<ReportRecord>& records) {
  out << "removed,accuracy,accuracy_retrain\n";
  std::size_t removed = 0;
  for (const auto& r : records) {
    removed += r.items;
    out << removed << ',' << Cell(r.accuracy) << ','
        << Cell(r.accuracy_retrain) << '\n';
  }
}

void WriteBoundTraceCsv(std::ostream& out,
                        const std::vector<ReportRecord>& records) {
  out << "index,kind,residual_true,bound_data,bound_worst\n";
  for (const auto& r : records) {
    out << r.index << ',' << r.kind << ',' << Cell(r.residual_true) << ','
        << Cell(r.bound_data) << ',' << Cell(r.bound_worst) << '\n';
  }
}

}  // namespace gunlearn
