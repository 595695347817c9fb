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

#ifndef GUNLEARN_UNLEARN_H_
#define GUNLEARN_UNLEARN_H_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gunlearn/graph.h"
#include "gunlearn/model.h"

namespace gunlearn {

// One Newton correction of a binary task.
struct UnlearnStep {
  Eigen::VectorXd delta;      // grad L(w, D) - grad L(w, D'), unperturbed
  Eigen::VectorXd direction;  // H^{-1} delta
  Eigen::VectorXd w_minus;    // w + direction
};

// w_minus = w + H^{-1} delta with H the Hessian of L(., D') at w and
// delta = grad_before - grad L(w, D'). Throws SolveError when the Cholesky
// factorization fails.
UnlearnStep NewtonUpdate(const Eigen::VectorXd& w,
                         const Eigen::VectorXd& grad_before,
                         const Eigen::MatrixXd& z_after,
                         std::span<const NodeId> rows_after,
                         const Eigen::VectorXd& y, const LossSpec& spec);

// Same, computing grad_before = grad L(w, D) from the pre-removal embeddings.
UnlearnStep NewtonUpdate(const Eigen::VectorXd& w,
                         const Eigen::MatrixXd& z_before,
                         std::span<const NodeId> rows_before,
                         const Eigen::MatrixXd& z_after,
                         std::span<const NodeId> rows_after,
                         const Eigen::VectorXd& y, const LossSpec& spec);

// Largest singular value of z by power iteration on z^T z, stopping after
// max_iterations or when the estimate changes by less than rel_tol.
double SpectralNorm(const Eigen::MatrixXd& z, int max_iterations = 100,
                    double rel_tol = 1e-6);

// 2 c1 ||1^T R||, with `residual_sums` the per-column residue totals.
double ResidualTerm(const LossSpec& spec,
                    const Eigen::VectorXd& residual_sums);
// gamma2 ||Z'|| ||h|| ||Z' h||.
double CurvatureTerm(const LossSpec& spec, double z_norm,
                     const Eigen::MatrixXd& z_after,
                     const Eigen::VectorXd& direction);

// sqrt(n) L rmax.
double PropagationError(std::size_t n, int levels, double rmax);

// Worst-case gradient residual for one removal. `num_train` is the training
// set size before the removal and must exceed one (ConfigError otherwise).
struct WorstCaseParams {
  int num_features = 0;
  std::size_t num_train = 0;
  double eps1 = 0.0;
};
double FeatureRemovalBound(const LossSpec& spec, const WorstCaseParams& p,
                           double degree_u);
// Degrees are taken after the removal.
double EdgeRemovalBound(const LossSpec& spec, const WorstCaseParams& p,
                        double degree_u, double degree_v);
// degree_u before the removal, neighbor degrees after it.
double NodeRemovalBound(const LossSpec& spec, const WorstCaseParams& p,
                        double degree_u,
                        std::span<const double> neighbor_degrees);

// alpha eps / sqrt(2 ln(1.5 / delta)). Throws ConfigError unless alpha >= 0,
// eps > 0 and 0 < delta < 1.5.
double PrivacyBudget(double alpha, double epsilon, double delta);

// Accumulated curvature error per task against a fixed budget.
class BudgetLedger {
 public:
  BudgetLedger() = default;
  BudgetLedger(int num_tasks, double budget);

  double budget() const { return budget_; }
  double beta(int task) const { return beta_[task]; }
  int num_tasks() const { return static_cast<int>(beta_.size()); }
  int retrains() const { return retrains_; }

  // max_k beta_k + term2_k + term1, the guard value after accumulating.
  double Projected(std::span<const double> term2, double term1) const;
  bool Exceeds(std::span<const double> term2, double term1) const {
    return Projected(term2, term1) > budget_;
  }
  void Accumulate(std::span<const double> term2);
  // Clears every beta and counts one retrain.
  void RecordRetrain();

 private:
  std::vector<double> beta_;
  double budget_ = 0.0;
  int retrains_ = 0;
};

}  // namespace gunlearn

#endif  // GUNLEARN_UNLEARN_H_
