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

#include "gunlearn/engine.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

#include "gunlearn/errors.h"
#include "gunlearn/oracle.h"
#include "gunlearn/parallel.h"

namespace gunlearn {
namespace {

using Clock = std::chrono::steady_clock;

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::vector<Eigen::VectorXd> AllTargets(const Dataset& data) {
  std::vector<Eigen::VectorXd> out;
  for (int k = 0; k < data.num_classes; ++k) {
    out.push_back(BinaryLabels(data.store.labels, k));
  }
  return out;
}

}  // namespace

void EngineConfig::Validate() const {
  propagation.Validate();
  loss.Validate();
  PrivacyBudget(alpha, epsilon, delta);
}

Engine::Engine(Dataset data, EngineConfig config)
    : data_(std::move(data)),
      config_(std::move(config)),
      state_((config_.Validate(), data_.Validate(),
              PropagationState::Init(data_.graph,
                                     NormalizeRows(data_.store.features),
                                     config_.propagation))),
      emb_(state_.Materialize(data_.graph)),
      ledger_(data_.num_classes, PrivacyBudget(config_.alpha, config_.epsilon,
                                               config_.delta)),
      targets_(AllTargets(data_)) {
  model_ = TrainOneVsAll(emb_.z, data_.TrainRows(), data_.store.labels,
                         data_.num_classes, config_.loss, config_.alpha,
                         config_.seed, 0, config_.train);
  RefreshGradients();
}

Engine::Engine(Dataset data, EngineConfig config, PropagationState state,
               LinearModel model)
    : data_(std::move(data)),
      config_(std::move(config)),
      state_(std::move(state)),
      emb_(state_.Materialize(data_.graph)),
      model_(std::move(model)),
      ledger_(data_.num_classes, PrivacyBudget(config_.alpha, config_.epsilon,
                                               config_.delta)),
      targets_(AllTargets(data_)) {
  data_.Validate();
  if (state_.num_nodes() != data_.num_nodes() ||
      model_.num_classes() != data_.num_classes ||
      model_.num_features() != state_.num_columns()) {
    throw ConfigError("snapshot, model and dataset do not match");
  }
  config_.propagation = state_.config();
  RefreshGradients();
}

void Engine::RefreshGradients() {
  const auto rows = data_.TrainRows();
  grad_.resize(model_.num_classes());
  ParallelFor(grad_.size(), [&](std::size_t k) {
    grad_[k] = Gradient(model_.w[k], emb_.z, rows, targets_[k], model_.spec);
  });
}

double Engine::ApplyForBound(Dataset& scratch, const RemovalItem& item,
                             std::vector<EdgeDelta>* deltas,
                             std::vector<NodeId>* zeroed) const {
  const WorstCaseParams params{
      static_cast<int>(state_.num_columns()), scratch.store.num_train,
      PropagationError(scratch.num_nodes(), state_.levels(), state_.rmax())};
  const bool defined = params.num_train > 1;
  const Graph& g = scratch.graph;
  const LossSpec& spec = config_.loss;
  double bound = std::numeric_limits<double>::infinity();
  if (const auto* e = std::get_if<EdgeRemoval>(&item)) {
    deltas->push_back(RemoveEdge(scratch, e->u, e->v));
    if (defined) bound = EdgeRemovalBound(spec, params, g.degree(e->u),
                                          g.degree(e->v));
  } else if (const auto* r = std::get_if<NodeRemoval>(&item)) {
    const double du = g.degree(r->u);
    const auto removed = RemoveNode(scratch, r->u);
    std::vector<double> nbr_degrees;
    for (const EdgeDelta& d : removed) {
      if (!d.is_self_loop()) nbr_degrees.push_back(g.degree(d.v));
    }
    deltas->insert(deltas->end(), removed.begin(), removed.end());
    if (defined) bound = NodeRemovalBound(spec, params, du, nbr_degrees);
  } else {
    const NodeId u = std::get<FeatureRemoval>(item).u;
    const double du = g.degree(u);
    ZeroFeature(scratch, u);
    zeroed->push_back(u);
    if (defined) bound = FeatureRemovalBound(spec, params, du);
  }
  return bound;
}

StepReport Engine::Process(const RemovalRequest& request) {
  StepReport report;
  report.kind = KindOf(request);
  report.items = request.items.size();
  if (request.items.empty()) return report;
  if (!request.batch && request.items.size() != 1) {
    throw ConfigError("a non-batch request carries exactly one item");
  }
  const auto start = Clock::now();

  std::vector<EdgeDelta> deltas;
  std::vector<NodeId> zeroed;
  double worst_step = 0.0;
  if (request.batch) {
    Dataset scratch = data_;
    for (const RemovalItem& item : request.items) {
      CheckApplicable(scratch, item);
      worst_step += ApplyForBound(scratch, item, &deltas, &zeroed);
    }
    data_ = std::move(scratch);
  } else {
    CheckApplicable(data_, request.items.front());
    worst_step = ApplyForBound(data_, request.items.front(), &deltas, &zeroed);
  }

  const auto prop_start = Clock::now();
  const std::uint64_t pushes_before = state_.push_count();
  const Graph& g = data_.graph;
  if (request.batch) {
    state_.ApplyBatchRemoval(g, deltas, zeroed);
  } else if (report.kind == RemovalKind::kEdge) {
    state_.ApplyEdgeRemoval(g, deltas.front());
  } else if (report.kind == RemovalKind::kNode) {
    state_.ApplyNodeRemoval(g, std::get<NodeRemoval>(request.items[0]).u,
                            deltas);
  } else {
    state_.ApplyFeatureRemoval(g, zeroed.front());
  }
  emb_ = state_.Materialize(g);
  report.prop_ms = MillisSince(prop_start);
  report.pushes = state_.push_count() - pushes_before;

  const auto rows = data_.TrainRows();
  const int classes = model_.num_classes();
  const double z_norm = SpectralNorm(emb_.z);
  std::vector<UnlearnStep> steps(classes);
  report.term2.assign(classes, 0.0);
  ParallelFor(classes, [&](std::size_t k) {
    steps[k] = NewtonUpdate(model_.w[k], grad_[k], emb_.z, rows, targets_[k],
                            model_.spec);
    report.term2[k] =
        CurvatureTerm(model_.spec, z_norm, emb_.z, steps[k].direction);
  });
  report.term1 = ResidualTerm(model_.spec, emb_.residual_sums);
  report.bound_data = ledger_.Projected(report.term2, report.term1);
  worst_ += worst_step;
  report.bound_worst = worst_;

  if (config_.enforce_budget && report.bound_data > ledger_.budget()) {
    Retrain();
    report.retrained = true;
  } else {
    ledger_.Accumulate(report.term2);
    for (int k = 0; k < classes; ++k) model_.w[k] = steps[k].w_minus;
    RefreshGradients();
  }
  for (int k = 0; k < classes; ++k) report.beta.push_back(ledger_.beta(k));
  if (config_.compute_true_residual) report.residual_true = TrueResidual();
  report.total_ms = MillisSince(start);
  return report;
}

void Engine::Retrain() {
  model_ = TrainOneVsAll(emb_.z, data_.TrainRows(), data_.store.labels,
                         data_.num_classes, config_.loss, config_.alpha,
                         config_.seed, model_.epoch + 1, config_.train);
  ledger_.RecordRetrain();
  worst_ = 0.0;
  RefreshGradients();
}

Eigen::VectorXd Engine::ReferenceWeights(int task) const {
  return TrainBinary(emb_.z, data_.TrainRows(), targets_.at(task),
                     model_.spec, model_.b.at(task), config_.train);
}

double Engine::TrueResidual() const {
  const Eigen::MatrixXd z = ExactEmbeddings(
      data_.graph, state_.signal(), state_.levels(), state_.weights());
  const auto rows = data_.TrainRows();
  double worst = 0.0;
  for (int k = 0; k < model_.num_classes(); ++k) {
    worst = std::max(worst, ExactGradientResidual(model_.w[k], z, rows,
                                                  targets_[k], model_.spec,
                                                  model_.b[k]));
  }
  return worst;
}

double Engine::Accuracy(Split split) const {
  return gunlearn::Accuracy(Predict(), data_.store.labels,
                            data_.NodesInSplit(split));
}

Baseline RetrainBaseline(const Engine& engine) {
  const PropagationState& s = engine.state();
  const Dataset& data = engine.data();
  const EngineConfig& config = engine.config();
  Baseline out;
  out.z = ExactEmbeddings(data.graph, s.signal(), s.levels(), s.weights());
  out.model = TrainOneVsAll(out.z, data.TrainRows(), data.store.labels,
                            data.num_classes, config.loss, config.alpha,
                            config.seed, 0, config.train);
  return out;
}

}  // namespace gunlearn
