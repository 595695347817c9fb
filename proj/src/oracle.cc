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

#include "gunlearn/oracle.h"

#include <cmath>
#include <string>

#include "gunlearn/errors.h"

namespace gunlearn {

Eigen::MatrixXd ExactEmbeddings(const Graph& g, const Eigen::MatrixXd& signal,
                                int levels, std::span<const double> weights) {
  if (levels < 0 || weights.size() != static_cast<std::size_t>(levels) + 1) {
    throw ConfigError("oracle needs L+1 weights");
  }
  const NodeId n = g.num_nodes();
  if (signal.rows() != n) throw ConfigError("signal rows != node count");
  Eigen::VectorXd inv_sqrt = Eigen::VectorXd::Zero(n);
  for (NodeId u = 0; u < n; ++u) {
    if (g.is_live(u)) inv_sqrt[u] = 1.0 / std::sqrt(g.degree(u));
  }
  Eigen::MatrixXd y = signal;
  for (NodeId u = 0; u < n; ++u) {
    if (!g.is_live(u)) y.row(u).setZero();
  }
  Eigen::MatrixXd z = weights[0] * y;
  Eigen::MatrixXd next(n, signal.cols());
  for (int level = 1; level <= levels; ++level) {
    next.setZero();
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId t : g.neighbors(u)) {
        next.row(u) += (inv_sqrt[u] * inv_sqrt[t]) * y.row(t);
      }
    }
    y.swap(next);
    if (weights[level] != 0.0) z += weights[level] * y;
  }
  return z;
}

double ExactGradientResidual(const Eigen::VectorXd& w,
                             const Eigen::MatrixXd& z_exact,
                             std::span<const NodeId> rows,
                             const Eigen::VectorXd& y, const LossSpec& spec,
                             const Eigen::VectorXd& b) {
  return Gradient(w, z_exact, rows, y, spec, b).norm();
}

}  // namespace gunlearn
