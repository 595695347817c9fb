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

#ifndef GUNLEARN_ENGINE_H_
#define GUNLEARN_ENGINE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gunlearn/graph.h"
#include "gunlearn/model.h"
#include "gunlearn/propagation.h"
#include "gunlearn/unlearn.h"

namespace gunlearn {

struct EngineConfig {
  PropagationConfig propagation;
  LossSpec loss;
  double alpha = 0.0;
  double epsilon = 1.0;
  double delta = 1e-4;
  std::uint64_t seed = 0;
  // When false the guard is evaluated and reported but never retrains.
  bool enforce_budget = true;
  // Evaluates the gradient residual on exact embeddings after every request.
  bool compute_true_residual = false;
  TrainOptions train;

  void Validate() const;
};

struct StepReport {
  RemovalKind kind = RemovalKind::kBatch;
  std::size_t items = 0;
  double total_ms = 0.0;
  double prop_ms = 0.0;
  bool retrained = false;
  double term1 = 0.0;          // 2 c1 ||1^T R|| on the updated state
  std::vector<double> term2;   // curvature term of this step per class
  std::vector<double> beta;    // accumulated curvature error per class
  double bound_data = 0.0;     // max_k beta_k + term1, the guard value
  double bound_worst = 0.0;    // worst-case bounds summed since last retrain
  std::optional<double> residual_true;
  std::uint64_t pushes = 0;
};

// Removal-processing driver: owns the dataset, the propagation state, the
// one-vs-all model and the budget ledger. Accumulated worst-case and
// curvature terms restart at every retrain.
class Engine {
 public:
  // Row-normalizes the features, propagates and trains (noise epoch 0).
  Engine(Dataset data, EngineConfig config);
  // Resumes from a saved snapshot and model; `data` must already reflect
  // every removal the snapshot has seen. The ledger starts empty.
  Engine(Dataset data, EngineConfig config, PropagationState state,
         LinearModel model);

  // Applies one request. Requests are validated before anything changes: an
  // invalid item throws NotFoundError/RangeError and leaves the engine as it
  // was. An empty request is a no-op.
  StepReport Process(const RemovalRequest& request);

  // Trains every class again on the current embeddings with fresh noise,
  // resets the ledger and counts a retrain. Never propagates.
  void Retrain();

  // Minimizer of the current perturbed objective for `task`, keeping b.
  Eigen::VectorXd ReferenceWeights(int task) const;
  // Largest exact-embedding gradient residual over tasks (perturbed loss).
  double TrueResidual() const;

  std::vector<int> Predict() const { return gunlearn::Predict(model_, emb_.z); }
  double Accuracy(Split split) const;

  const Dataset& data() const { return data_; }
  const EngineConfig& config() const { return config_; }
  const PropagationState& state() const { return state_; }
  const EmbeddingMatrix& embeddings() const { return emb_; }
  const LinearModel& model() const { return model_; }
  const BudgetLedger& ledger() const { return ledger_; }
  double budget() const { return ledger_.budget(); }
  // Binary +-1 targets of a task over all nodes.
  const Eigen::VectorXd& targets(int task) const { return targets_[task]; }

 private:
  // Worst-case bound of one item evaluated on `scratch` around its removal;
  // applies the item to `scratch`.
  double ApplyForBound(Dataset& scratch, const RemovalItem& item,
                       std::vector<EdgeDelta>* deltas,
                       std::vector<NodeId>* zeroed) const;
  void RefreshGradients();

  Dataset data_;
  EngineConfig config_;
  PropagationState state_;
  EmbeddingMatrix emb_;
  LinearModel model_;
  BudgetLedger ledger_;
  std::vector<Eigen::VectorXd> targets_;
  std::vector<Eigen::VectorXd> grad_;  // grad L(w_k, D) on current state
  double worst_ = 0.0;
};

// Retraining baseline: exact embeddings of the engine's current graph and
// signal, trained with the engine's seed and noise epoch 0.
struct Baseline {
  Eigen::MatrixXd z;
  LinearModel model;
};
Baseline RetrainBaseline(const Engine& engine);

}  // namespace gunlearn

#endif  // GUNLEARN_ENGINE_H_
