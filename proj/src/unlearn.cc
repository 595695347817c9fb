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

#include "gunlearn/unlearn.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gunlearn/errors.h"

namespace gunlearn {
namespace {

void CheckTrain(const WorstCaseParams& p, std::size_t min_train) {
  if (p.num_train < min_train) {
    throw ConfigError("worst-case bound undefined for n_t = " +
                      std::to_string(p.num_train));
  }
}

}  // namespace

UnlearnStep NewtonUpdate(const Eigen::VectorXd& w,
                         const Eigen::VectorXd& grad_before,
                         const Eigen::MatrixXd& z_after,
                         std::span<const NodeId> rows_after,
                         const Eigen::VectorXd& y, const LossSpec& spec) {
  UnlearnStep step;
  step.delta = grad_before - Gradient(w, z_after, rows_after, y, spec);
  Eigen::LLT<Eigen::MatrixXd> llt(Hessian(w, z_after, rows_after, y, spec));
  if (llt.info() != Eigen::Success) {
    throw SolveError("post-removal Hessian is not positive definite");
  }
  step.direction = llt.solve(step.delta);
  if (!step.direction.allFinite()) {
    throw SolveError("Newton direction is not finite");
  }
  step.w_minus = w + step.direction;
  return step;
}

UnlearnStep NewtonUpdate(const Eigen::VectorXd& w,
                         const Eigen::MatrixXd& z_before,
                         std::span<const NodeId> rows_before,
                         const Eigen::MatrixXd& z_after,
                         std::span<const NodeId> rows_after,
                         const Eigen::VectorXd& y, const LossSpec& spec) {
  return NewtonUpdate(w, Gradient(w, z_before, rows_before, y, spec), z_after,
                      rows_after, y, spec);
}

double SpectralNorm(const Eigen::MatrixXd& z, int max_iterations,
                    double rel_tol) {
  if (z.size() == 0) return 0.0;
  const Eigen::MatrixXd gram = z.transpose() * z;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(gram.cols()).normalized();
  double estimate = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd next = gram * v;
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    const double change = std::abs(norm - estimate);
    estimate = norm;
    v = next / norm;
    if (it > 0 && change <= rel_tol * estimate) break;
  }
  return std::sqrt(estimate);
}

double ResidualTerm(const LossSpec& spec,
                    const Eigen::VectorXd& residual_sums) {
  return 2.0 * spec.c1 * residual_sums.norm();
}

double CurvatureTerm(const LossSpec& spec, double z_norm,
                     const Eigen::MatrixXd& z_after,
                     const Eigen::VectorXd& direction) {
  if (spec.gamma2 == 0.0) return 0.0;
  return spec.gamma2 * z_norm * direction.norm() *
         (z_after * direction).norm();
}

double PropagationError(std::size_t n, int levels, double rmax) {
  return std::sqrt(static_cast<double>(n)) * levels * rmax;
}

double FeatureRemovalBound(const LossSpec& spec, const WorstCaseParams& p,
                           double degree_u) {
  CheckTrain(p, 2);
  const double f = p.num_features;
  const double nt = static_cast<double>(p.num_train) - 1.0;
  const double lead = spec.c * spec.gamma1 * f / spec.lambda +
                      spec.c1 * std::sqrt(f * nt);
  return lead * (p.eps1 + 8.0 * spec.gamma1 * f * std::sqrt(degree_u) /
                              (spec.lambda * nt));
}

double EdgeRemovalBound(const LossSpec& spec, const WorstCaseParams& p,
                        double degree_u, double degree_v) {
  CheckTrain(p, 2);
  const double f = p.num_features;
  const double nt = static_cast<double>(p.num_train);
  const double lead = spec.c * spec.gamma1 * f / spec.lambda +
                      spec.c1 * std::sqrt(f * nt);
  const double shift = 2.0 * p.eps1 + 4.0 / std::sqrt(degree_u) +
                       4.0 / std::sqrt(degree_v);
  return 4.0 * spec.c * spec.gamma1 * f / (spec.lambda * nt) +
         lead * (p.eps1 + 2.0 * spec.gamma1 * f / (spec.lambda * nt) * shift);
}

double NodeRemovalBound(const LossSpec& spec, const WorstCaseParams& p,
                        double degree_u,
                        std::span<const double> neighbor_degrees) {
  CheckTrain(p, 2);
  const double f = p.num_features;
  const double nt = static_cast<double>(p.num_train) - 1.0;
  const double lead = spec.c * spec.gamma1 * f / spec.lambda +
                      spec.c1 * std::sqrt(f * nt);
  double shift = 2.0 * p.eps1 + 4.0 * std::sqrt(degree_u);
  for (double d : neighbor_degrees) shift += 4.0 / std::sqrt(d);
  return 4.0 * spec.c * spec.gamma1 * f / (spec.lambda * nt) +
         lead * (p.eps1 + 2.0 * spec.gamma1 * f / (spec.lambda * nt) * shift);
}

double PrivacyBudget(double alpha, double epsilon, double delta) {
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.5)) {
    throw ConfigError("delta must lie in (0, 1.5)");
  }
  return alpha * epsilon / std::sqrt(2.0 * std::log(1.5 / delta));
}

BudgetLedger::BudgetLedger(int num_tasks, double budget)
    : beta_(num_tasks, 0.0), budget_(budget) {}

double BudgetLedger::Projected(std::span<const double> term2,
                               double term1) const {
  double worst = 0.0;
  for (std::size_t k = 0; k < beta_.size(); ++k) {
    worst = std::max(worst, beta_[k] + (k < term2.size() ? term2[k] : 0.0));
  }
  return worst + term1;
}

void BudgetLedger::Accumulate(std::span<const double> term2) {
  for (std::size_t k = 0; k < beta_.size() && k < term2.size(); ++k) {
    beta_[k] += term2[k];
  }
}

void BudgetLedger::RecordRetrain() {
  std::fill(beta_.begin(), beta_.end(), 0.0);
  ++retrains_;
}

}  // namespace gunlearn
