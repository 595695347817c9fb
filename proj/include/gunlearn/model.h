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

#ifndef GUNLEARN_MODEL_H_
#define GUNLEARN_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gunlearn/graph.h"

namespace gunlearn {

enum class LossKind { kLogistic, kLeastSquares };

const char* LossKindName(LossKind kind);
// Accepts "logistic" and "least_squares"; throws ConfigError otherwise.
LossKind ParseLossKind(const std::string& name);

// Per-sample loss l(m, y) with ridge weight lambda and the constants used by
// the removal bounds: |l'| <= c1, l' is gamma1-Lipschitz, l'' is
// gamma2-Lipschitz and ||w*|| <= c / lambda.
struct LossSpec {
  LossKind kind = LossKind::kLogistic;
  double lambda = 1e-2;
  double c = 1.0;
  double c1 = 1.0;
  double gamma1 = 0.25;
  double gamma2 = 0.25;

  static LossSpec Logistic(double lambda);
  // Quadratic loss has no global derivative bound; c, c1 and gamma1 are set
  // to 1 as nominal values and gamma2 = 0 since l'' is constant.
  static LossSpec LeastSquares(double lambda);

  // Throws ConfigError unless lambda > 0.
  void Validate() const;

  double Value(double margin, double y) const;
  double First(double margin, double y) const;   // dl/dm
  double Second(double margin, double y) const;  // d2l/dm2
};

// Training rows `rows` of embedding matrix `z` with binary targets y(i) in
// {-1, +1} indexed by node id. The objective is
//
//   L_b(w) = sum_{i in rows} l(z_i w, y_i) + lambda |rows| / 2 ||w||^2 + b^T w
//
// and an empty `b` means b = 0.
double Loss(const Eigen::VectorXd& w, const Eigen::MatrixXd& z,
            std::span<const NodeId> rows, const Eigen::VectorXd& y,
            const LossSpec& spec, const Eigen::VectorXd& b = {});
Eigen::VectorXd Gradient(const Eigen::VectorXd& w, const Eigen::MatrixXd& z,
                         std::span<const NodeId> rows,
                         const Eigen::VectorXd& y, const LossSpec& spec,
                         const Eigen::VectorXd& b = {});
Eigen::MatrixXd Hessian(const Eigen::VectorXd& w, const Eigen::MatrixXd& z,
                        std::span<const NodeId> rows, const Eigen::VectorXd& y,
                        const LossSpec& spec);

struct TrainOptions {
  // Gradient tolerance is tolerance_per_row * |rows|.
  double tolerance_per_row = 1e-10;
  int max_iterations = 200;
};

// Minimizes L_b by damped Newton with Armijo backtracking (direct solve for
// least squares). Throws ConfigError on an empty row set and TrainingError
// when the tolerance is not met within the iteration cap.
Eigen::VectorXd TrainBinary(const Eigen::MatrixXd& z,
                            std::span<const NodeId> rows,
                            const Eigen::VectorXd& y, const LossSpec& spec,
                            const Eigen::VectorXd& b,
                            const TrainOptions& options = {});

// +1 for nodes labeled `positive`, -1 otherwise.
Eigen::VectorXd BinaryLabels(std::span<const int> labels, int positive);

// i.i.d. Normal(0, alpha^2) noise for one task. The stream is a function of
// (seed, task, epoch) only.
Eigen::VectorXd SampleNoise(int dim, double alpha, std::uint64_t seed,
                            int task, int epoch);

// One-vs-all family of perturbed binary classifiers.
struct LinearModel {
  LossSpec spec;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  int epoch = 0;  // noise generation, bumped by every retrain
  std::vector<Eigen::VectorXd> w;
  std::vector<Eigen::VectorXd> b;

  int num_classes() const { return static_cast<int>(w.size()); }
  int num_features() const {
    return w.empty() ? 0 : static_cast<int>(w.front().size());
  }
};

// Trains one task per class on `rows`, in parallel across classes.
LinearModel TrainOneVsAll(const Eigen::MatrixXd& z,
                          std::span<const NodeId> rows,
                          std::span<const int> labels, int num_classes,
                          const LossSpec& spec, double alpha,
                          std::uint64_t seed, int epoch = 0,
                          const TrainOptions& options = {});

// Argmax of z_i w_k over classes, ties to the lowest index.
std::vector<int> Predict(const LinearModel& model, const Eigen::MatrixXd& z);
// Fraction of `nodes` whose prediction matches the label; 0 for no nodes.
double Accuracy(std::span<const int> predicted, std::span<const int> labels,
                std::span<const NodeId> nodes);

// Binary model file: magic, F, classes, lambda, alpha, seed, epoch, loss
// kind, then w and b of every class as little-endian 64-bit floats.
void SaveModel(const LinearModel& model, const std::string& path);
LinearModel LoadModel(const std::string& path);

}  // namespace gunlearn

#endif  // GUNLEARN_MODEL_H_
