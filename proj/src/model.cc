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

#include "gunlearn/model.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <random>

#include "gunlearn/errors.h"
#include "gunlearn/parallel.h"

namespace gunlearn {
namespace {

constexpr std::uint64_t kModelMagic = 0x4C444F4D'4E554721ULL;  // "!GUNMODL"
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;

static_assert(std::endian::native == std::endian::little,
              "model format assumes a little-endian host");

double Sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// log(1 + exp(t)) without overflow.
double Softplus(double t) {
  return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

Eigen::MatrixXd Rows(const Eigen::MatrixXd& z, std::span<const NodeId> rows) {
  Eigen::MatrixXd out(rows.size(), z.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = z.row(rows[i]);
  return out;
}

Eigen::VectorXd Targets(const Eigen::VectorXd& y,
                        std::span<const NodeId> rows) {
  Eigen::VectorXd out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = y[rows[i]];
  return out;
}

void CheckRows(std::span<const NodeId> rows) {
  if (rows.empty()) throw ConfigError("empty training set");
}

// Objective pieces over a gathered row block.
struct Problem {
  Eigen::MatrixXd zt;
  Eigen::VectorXd yt;
  const LossSpec& spec;
  const Eigen::VectorXd& b;

  double ridge() const { return spec.lambda * static_cast<double>(zt.rows()); }

  double Value(const Eigen::VectorXd& w) const {
    const Eigen::VectorXd m = zt * w;
    double total = 0.0;
    for (Eigen::Index i = 0; i < m.size(); ++i) total += spec.Value(m[i], yt[i]);
    total += 0.5 * ridge() * w.squaredNorm();
    if (b.size() != 0) total += b.dot(w);
    return total;
  }

  Eigen::VectorXd Grad(const Eigen::VectorXd& w) const {
    const Eigen::VectorXd m = zt * w;
    Eigen::VectorXd d(m.size());
    for (Eigen::Index i = 0; i < m.size(); ++i) d[i] = spec.First(m[i], yt[i]);
    Eigen::VectorXd g = zt.transpose() * d + ridge() * w;
    if (b.size() != 0) g += b;
    return g;
  }

  Eigen::MatrixXd Hess(const Eigen::VectorXd& w) const {
    const Eigen::VectorXd m = zt * w;
    Eigen::VectorXd s(m.size());
    for (Eigen::Index i = 0; i < m.size(); ++i) s[i] = spec.Second(m[i], yt[i]);
    Eigen::MatrixXd h = zt.transpose() * s.asDiagonal() * zt;
    h.diagonal().array() += ridge();
    return h;
  }
};

template <typename T>
void WritePod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T ReadPod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IoError("truncated model file");
  return value;
}

}  // namespace

const char* LossKindName(LossKind kind) {
  return kind == LossKind::kLogistic ? "logistic" : "least_squares";
}

LossKind ParseLossKind(const std::string& name) {
  if (name == "logistic") return LossKind::kLogistic;
  if (name == "least_squares") return LossKind::kLeastSquares;
  throw ConfigError("unknown loss '" + name +
                    "' (expected logistic or least_squares)");
}

LossSpec LossSpec::Logistic(double lambda) {
  return {LossKind::kLogistic, lambda, 1.0, 1.0, 0.25, 0.25};
}

LossSpec LossSpec::LeastSquares(double lambda) {
  return {LossKind::kLeastSquares, lambda, 1.0, 1.0, 1.0, 0.0};
}

void LossSpec::Validate() const {
  if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
}

double LossSpec::Value(double margin, double y) const {
  if (kind == LossKind::kLogistic) return Softplus(-y * margin);
  const double e = margin - y;
  return 0.5 * e * e;
}

double LossSpec::First(double margin, double y) const {
  if (kind == LossKind::kLogistic) return -y * Sigmoid(-y * margin);
  return margin - y;
}

double LossSpec::Second(double margin, double) const {
  if (kind == LossKind::kLogistic) {
    return Sigmoid(margin) * Sigmoid(-margin);
  }
  return 1.0;
}

double Loss(const Eigen::VectorXd& w, const Eigen::MatrixXd& z,
            std::span<const NodeId> rows, const Eigen::VectorXd& y,
            const LossSpec& spec, const Eigen::VectorXd& b) {
  CheckRows(rows);
  return Problem{Rows(z, rows), Targets(y, rows), spec, b}.Value(w);
}

Eigen::VectorXd Gradient(const Eigen::VectorXd& w, const Eigen::MatrixXd& z,
                         std::span<const NodeId> rows,
                         const Eigen::VectorXd& y, const LossSpec& spec,
                         const Eigen::VectorXd& b) {
  return Problem{Rows(z, rows), Targets(y, rows), spec, b}.Grad(w);
}

Eigen::MatrixXd Hessian(const Eigen::VectorXd& w, const Eigen::MatrixXd& z,
                        std::span<const NodeId> rows, const Eigen::VectorXd& y,
                        const LossSpec& spec) {
  const Eigen::VectorXd none;
  return Problem{Rows(z, rows), Targets(y, rows), spec, none}.Hess(w);
}

Eigen::VectorXd TrainBinary(const Eigen::MatrixXd& z,
                            std::span<const NodeId> rows,
                            const Eigen::VectorXd& y, const LossSpec& spec,
                            const Eigen::VectorXd& b,
                            const TrainOptions& options) {
  spec.Validate();
  CheckRows(rows);
  const Problem p{Rows(z, rows), Targets(y, rows), spec, b};
  const double tol = options.tolerance_per_row * static_cast<double>(rows.size());
  const Eigen::Index f = z.cols();

  if (spec.kind == LossKind::kLeastSquares) {
    Eigen::VectorXd rhs = p.zt.transpose() * p.yt;
    if (b.size() != 0) rhs -= b;
    Eigen::VectorXd w = p.Hess(Eigen::VectorXd::Zero(f)).llt().solve(rhs);
    const double norm = p.Grad(w).norm();
    if (!(norm <= tol)) {
      throw TrainingError("least-squares solve missed tolerance", norm);
    }
    return w;
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(f);
  double value = p.Value(w);
  Eigen::VectorXd g = p.Grad(w);
  for (int it = 0; it < options.max_iterations; ++it) {
    const double norm = g.norm();
    if (norm <= tol) return w;
    Eigen::LLT<Eigen::MatrixXd> llt(p.Hess(w));
    if (llt.info() != Eigen::Success) {
      throw TrainingError("Hessian lost positive definiteness", norm);
    }
    const Eigen::VectorXd step = -llt.solve(g);
    const double slope = g.dot(step);
    double t = 1.0;
    Eigen::VectorXd next = w + step;
    double next_value = p.Value(next);
    Eigen::VectorXd next_grad;
    bool accepted = false;
    for (int k = 0; k < kMaxHalvings; ++k) {
      if (next_value <= value + kArmijo * t * slope) {
        accepted = true;
        break;
      }
      // Near the optimum the decrease drops below round-off; a full step that
      // still shrinks the gradient is taken instead.
      if (k == 0) {
        next_grad = p.Grad(next);
        if (next_grad.norm() < norm &&
            next_value - value <= 1e-12 * std::max(1.0, std::abs(value))) {
          accepted = true;
          break;
        }
        next_grad.resize(0);
      }
      t *= 0.5;
      next = w + t * step;
      next_value = p.Value(next);
    }
    if (!accepted) throw TrainingError("line search failed", norm);
    w = std::move(next);
    value = next_value;
    g = next_grad.size() != 0 ? std::move(next_grad) : p.Grad(w);
  }
  const double norm = g.norm();
  if (norm <= tol) return w;
  throw TrainingError("no convergence after " +
                          std::to_string(options.max_iterations) +
                          " iterations, gradient norm " + std::to_string(norm),
                      norm);
}

Eigen::VectorXd BinaryLabels(std::span<const int> labels, int positive) {
  Eigen::VectorXd y(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    y[i] = labels[i] == positive ? 1.0 : -1.0;
  }
  return y;
}

Eigen::VectorXd SampleNoise(int dim, double alpha, std::uint64_t seed,
                            int task, int epoch) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
  if (alpha == 0.0) return b;
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(task),
                    static_cast<std::uint32_t>(epoch)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, alpha);
  for (int i = 0; i < dim; ++i) b[i] = normal(rng);
  return b;
}

LinearModel TrainOneVsAll(const Eigen::MatrixXd& z,
                          std::span<const NodeId> rows,
                          std::span<const int> labels, int num_classes,
                          const LossSpec& spec, double alpha,
                          std::uint64_t seed, int epoch,
                          const TrainOptions& options) {
  if (num_classes < 1) throw ConfigError("need at least one class");
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
  LinearModel model;
  model.spec = spec;
  model.alpha = alpha;
  model.seed = seed;
  model.epoch = epoch;
  model.w.resize(num_classes);
  model.b.resize(num_classes);
  const int f = static_cast<int>(z.cols());
  ParallelFor(num_classes, [&](std::size_t k) {
    const int task = static_cast<int>(k);
    model.b[k] = SampleNoise(f, alpha, seed, task, epoch);
    model.w[k] = TrainBinary(z, rows, BinaryLabels(labels, task), spec,
                             model.b[k], options);
  });
  return model;
}

std::vector<int> Predict(const LinearModel& model, const Eigen::MatrixXd& z) {
  std::vector<int> out(z.rows(), 0);
  if (model.num_classes() == 0) return out;
  Eigen::MatrixXd w(z.cols(), model.num_classes());
  for (int k = 0; k < model.num_classes(); ++k) w.col(k) = model.w[k];
  const Eigen::MatrixXd margins = z * w;
  for (Eigen::Index i = 0; i < margins.rows(); ++i) {
    Eigen::Index best = 0;
    margins.row(i).maxCoeff(&best);  // first maximum wins
    out[i] = static_cast<int>(best);
  }
  return out;
}

double Accuracy(std::span<const int> predicted, std::span<const int> labels,
                std::span<const NodeId> nodes) {
  if (nodes.empty()) return 0.0;
  std::size_t hits = 0;
  for (NodeId u : nodes) hits += predicted[u] == labels[u];
  return static_cast<double>(hits) / static_cast<double>(nodes.size());
}

void SaveModel(const LinearModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  WritePod(out, kModelMagic);
  WritePod(out, static_cast<std::uint64_t>(model.num_features()));
  WritePod(out, static_cast<std::uint64_t>(model.num_classes()));
  WritePod(out, model.spec.lambda);
  WritePod(out, model.alpha);
  WritePod(out, model.seed);
  WritePod(out, static_cast<std::int64_t>(model.epoch));
  WritePod(out, static_cast<std::uint32_t>(model.spec.kind));
  for (int k = 0; k < model.num_classes(); ++k) {
    out.write(reinterpret_cast<const char*>(model.w[k].data()),
              static_cast<std::streamsize>(model.w[k].size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(model.b[k].data()),
              static_cast<std::streamsize>(model.b[k].size() * sizeof(double)));
  }
  if (!out) throw IoError("failed writing " + path);
}

LinearModel LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  if (ReadPod<std::uint64_t>(in) != kModelMagic) {
    throw ParseError(path + ": not a model file", 0);
  }
  const auto f = ReadPod<std::uint64_t>(in);
  const auto classes = ReadPod<std::uint64_t>(in);
  const double lambda = ReadPod<double>(in);
  LinearModel model;
  model.alpha = ReadPod<double>(in);
  model.seed = ReadPod<std::uint64_t>(in);
  model.epoch = static_cast<int>(ReadPod<std::int64_t>(in));
  const auto kind = ReadPod<std::uint32_t>(in);
  if (kind > static_cast<std::uint32_t>(LossKind::kLeastSquares)) {
    throw ParseError(path + ": unknown loss kind", 0);
  }
  model.spec = static_cast<LossKind>(kind) == LossKind::kLogistic
                   ? LossSpec::Logistic(lambda)
                   : LossSpec::LeastSquares(lambda);
  model.w.assign(classes, Eigen::VectorXd(f));
  model.b.assign(classes, Eigen::VectorXd(f));
  for (std::uint64_t k = 0; k < classes; ++k) {
    in.read(reinterpret_cast<char*>(model.w[k].data()),
            static_cast<std::streamsize>(f * sizeof(double)));
    in.read(reinterpret_cast<char*>(model.b[k].data()),
            static_cast<std::streamsize>(f * sizeof(double)));
  }
  if (!in) throw IoError("truncated model file " + path);
  return model;
}

}  // namespace gunlearn
