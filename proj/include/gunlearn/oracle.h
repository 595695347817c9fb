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

#ifndef GUNLEARN_ORACLE_H_
#define GUNLEARN_ORACLE_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gunlearn/graph.h"
#include "gunlearn/model.h"

namespace gunlearn {

// Exact GPR embeddings sum_l w_l P^l x with P = D^{-1/2} A D^{-1/2} on the
// current graph, by repeated neighbor sums. Rows of removed nodes are zero.
Eigen::MatrixXd ExactEmbeddings(const Graph& g, const Eigen::MatrixXd& signal,
                                int levels, std::span<const double> weights);

// ||grad L_b(w, D')|| evaluated on exact embeddings `z_exact`. An empty `b`
// gives the unperturbed loss.
double ExactGradientResidual(const Eigen::VectorXd& w,
                             const Eigen::MatrixXd& z_exact,
                             std::span<const NodeId> rows,
                             const Eigen::VectorXd& y, const LossSpec& spec,
                             const Eigen::VectorXd& b = {});

}  // namespace gunlearn

#endif  // GUNLEARN_ORACLE_H_
