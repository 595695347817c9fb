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

#include "gunlearn/dataset_io.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gunlearn/errors.h"

namespace gunlearn {
namespace {

std::ifstream OpenIn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");
  return in;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
bool ParseNumber(std::string_view token, T& value) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  return ec == std::errc() && ptr == end;
}

// Re-throws parse errors from loaders with the file name attached.
template <typename Fn>
auto WithFile(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  } catch (const RangeError& e) {
    throw RangeError(path + ": " + e.what());
  }
}

}  // namespace

const char* SplitName(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "?";
}

Graph ParseEdgeList(std::istream& in, NodeId num_nodes) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = Trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::istringstream fields{std::string(body)};
    std::string a, b, extra;
    fields >> a >> b;
    NodeId u = 0, v = 0;
    if (a.empty() || b.empty() || (fields >> extra) ||
        !ParseNumber<NodeId>(a, u) || !ParseNumber<NodeId>(b, v)) {
      throw ParseError("expected \"u v\", got \"" + std::string(body) + "\"",
                       line_no);
    }
    if (u >= num_nodes || v >= num_nodes) {
      throw RangeError("line " + std::to_string(line_no) + ": endpoint >= n=" +
                       std::to_string(num_nodes));
    }
    if (u == v) {
      throw ParseError("self-loop " + std::to_string(u) + " in edge list",
                       line_no);
    }
    edges.emplace_back(u, v);
  }
  return Graph::FromEdges(num_nodes, edges);
}

Graph LoadEdgeList(const std::string& path, NodeId num_nodes) {
  auto in = OpenIn(path);
  return WithFile(path, [&] { return ParseEdgeList(in, num_nodes); });
}

void WriteEdgeList(std::ostream& out,
                   const std::vector<std::pair<NodeId, NodeId>>& edges) {
  for (const auto& [u, v] : edges) out << u << ' ' << v << '\n';
}

Eigen::MatrixXd ParseFeaturesCsv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = Trim(line);
    if (body.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      const auto token = Trim(body.substr(start, comma == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : comma - start));
      double value = 0.0;
      if (!ParseNumber<double>(token, value)) {
        throw ParseError("bad number \"" + std::string(token) + "\"",
                         line_no);
      }
      row.push_back(value);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("expected " + std::to_string(rows.front().size()) +
                           " columns, got " + std::to_string(row.size()),
                       line_no);
    }
    rows.push_back(std::move(row));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index f = rows.empty() ? 0 : rows.front().size();
  Eigen::MatrixXd x(n, f);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < f; ++j) x(i, j) = rows[i][j];
  }
  return x;
}

std::vector<int> ParseLabels(std::istream& in) {
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = Trim(line);
    if (body.empty()) continue;
    int value = 0;
    if (!ParseNumber<int>(body, value) || value < 0) {
      throw ParseError("bad label \"" + std::string(body) + "\"", line_no);
    }
    labels.push_back(value);
  }
  return labels;
}

std::vector<Split> ParseSplits(std::istream& in) {
  std::vector<Split> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = Trim(line);
    if (body.empty()) continue;
    if (body == "train") {
      out.push_back(Split::kTrain);
    } else if (body == "val") {
      out.push_back(Split::kVal);
    } else if (body == "test") {
      out.push_back(Split::kTest);
    } else {
      throw ParseError("expected train/val/test, got \"" + std::string(body) +
                           "\"",
                       line_no);
    }
  }
  return out;
}

Dataset LoadDataset(const DatasetPaths& paths) {
  Dataset data;
  {
    auto in = OpenIn(paths.features);
    data.store.features =
        WithFile(paths.features, [&] { return ParseFeaturesCsv(in); });
  }
  const NodeId n = static_cast<NodeId>(data.store.features.rows());
  data.graph = LoadEdgeList(paths.edges, n);
  {
    auto in = OpenIn(paths.labels);
    data.store.labels = WithFile(paths.labels, [&] { return ParseLabels(in); });
  }
  {
    auto in = OpenIn(paths.masks);
    data.store.split = WithFile(paths.masks, [&] { return ParseSplits(in); });
  }
  if (data.store.labels.size() != n || data.store.split.size() != n) {
    throw ConfigError("labels/masks have " +
                      std::to_string(data.store.labels.size()) + "/" +
                      std::to_string(data.store.split.size()) +
                      " rows, features have " + std::to_string(n));
  }
  data.store.ResetTrainMask();
  data.num_classes =
      n == 0 ? 1
             : *std::max_element(data.store.labels.begin(),
                                 data.store.labels.end()) +
                   1;
  data.Validate();
  return data;
}

void WriteDataset(const Dataset& data, const DatasetPaths& paths) {
  {
    auto out = OpenOut(paths.edges);
    WriteEdgeList(out, data.graph.Edges());
  }
  {
    auto out = OpenOut(paths.features);
    out << std::setprecision(17);
    const auto& x = data.store.features;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        if (j) out << ',';
        out << x(i, j);
      }
      out << '\n';
    }
  }
  {
    auto out = OpenOut(paths.labels);
    for (int label : data.store.labels) out << label << '\n';
  }
  {
    auto out = OpenOut(paths.masks);
    for (Split s : data.store.split) out << SplitName(s) << '\n';
  }
}

}  // namespace gunlearn
