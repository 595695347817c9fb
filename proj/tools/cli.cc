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

#include "cli.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gunlearn/dataset_io.h"
#include "gunlearn/engine.h"
#include "gunlearn/errors.h"
#include "gunlearn/oracle.h"
#include "gunlearn/synthetic.h"
#include "gunlearn/workload.h"
#include "json.hpp"

namespace gunlearn::cli {
namespace {

using nlohmann::json;

// Reads key=value lines for the active subcommand: top-level keys are
// attributed to it and '_' in keys matches '-' in flag names.
class SubcommandConfig : public CLI::ConfigINI {
 public:
  explicit SubcommandConfig(const CLI::App* app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    auto items = CLI::ConfigINI::from_config(in);
    const auto subs = app_->get_subcommands();
    if (subs.empty()) return items;
    for (auto& item : items) {
      const bool top = item.parents.empty() ||
                       (item.parents.size() == 1 && item.parents[0] == "default");
      if (!top) continue;
      item.parents = {subs.front()->get_name()};
      std::replace(item.name.begin(), item.name.end(), '_', '-');
    }
    return items;
  }

 private:
  const CLI::App* app_;
};

struct DatasetFlags {
  DatasetPaths paths;

  void Register(CLI::App* app) {
    app->add_option("--edges", paths.edges, "edge list, one 'u v' per line")
        ->required();
    app->add_option("--features", paths.features, "feature CSV")->required();
    app->add_option("--labels", paths.labels, "one class per line")
        ->required();
    app->add_option("--masks", paths.masks, "train/val/test per line")
        ->required();
  }
};

struct TrainFlags {
  DatasetFlags data;
  int levels = 2;
  std::vector<double> weights;
  double rmax = 1e-7;
  double lambda = 0.0;
  double alpha = 0.1;
  std::uint64_t seed = 1;
  std::string loss = "logistic";
  std::string model = "model.bin";
  std::string state = "state.bin";
  std::string output;
};

struct UnlearnFlags {
  DatasetFlags data;
  std::string model;
  std::string state;
  std::string workload;
  double epsilon = 1.0;
  std::optional<double> delta;
  std::string output;
  std::string summary;
  bool compare_retrain = false;
  bool oracle_checks = false;
  bool strict = false;
};

struct GenFlags {
  DatasetFlags data;
  std::string kind = "random-edges";
  std::size_t count = 0;
  std::size_t batch_size = 1;
  std::uint64_t seed = 1;
  std::uint32_t degree_threshold = 6;
  std::size_t target_pool = 2000;
  std::string output;
  std::string augmented_edges;
  std::string targets;
};

struct ReportFlags {
  std::vector<std::string> inputs;
  std::string summary;
  std::string accuracy;
  std::string bounds;
};

struct SynthFlags {
  SyntheticConfig config;
  std::string mode = "gaussian";
  std::string prefix;
};

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

// Writes to `path`, or to `fallback` when the path is empty.
template <typename Fn>
void WriteTo(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream out = OpenOut(path);
  fn(out);
  if (!out) throw IoError("failed writing " + path);
}

double Millis(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

json AccuracyJson(const Engine& engine) {
  return {{"train", engine.Accuracy(Split::kTrain)},
          {"val", engine.Accuracy(Split::kVal)},
          {"test", engine.Accuracy(Split::kTest)}};
}

int CmdTrain(const TrainFlags& f, std::ostream& out) {
  Dataset data = LoadDataset(f.data.paths);
  EngineConfig config;
  config.propagation = PropagationConfig::Sgc(f.levels, f.rmax);
  if (!f.weights.empty()) config.propagation.weights = f.weights;
  config.loss = ParseLossKind(f.loss) == LossKind::kLogistic
                    ? LossSpec::Logistic(f.lambda)
                    : LossSpec::LeastSquares(f.lambda);
  config.alpha = f.alpha;
  config.seed = f.seed;
  const auto start = std::chrono::steady_clock::now();
  const Engine engine(std::move(data), config);
  const double elapsed = Millis(start);
  engine.state().Save(f.state);
  SaveModel(engine.model(), f.model);
  const Dataset& d = engine.data();
  const json report = {{"nodes", d.num_nodes()},
                       {"edges", d.graph.num_edges()},
                       {"features", engine.state().num_columns()},
                       {"classes", d.num_classes},
                       {"num_train", d.store.num_train},
                       {"pushes", engine.state().push_count()},
                       {"total_ms", elapsed},
                       {"accuracy", AccuracyJson(engine)}};
  WriteTo(f.output, out, [&](std::ostream& s) { s << report.dump() << '\n'; });
  return kOk;
}

void ApplyItem(Dataset& data, const RemovalItem& item,
               std::set<NodeId>& zeroed) {
  CheckApplicable(data, item);
  if (const auto* e = std::get_if<EdgeRemoval>(&item)) {
    RemoveEdge(data, e->u, e->v);
  } else if (const auto* r = std::get_if<NodeRemoval>(&item)) {
    RemoveNode(data, r->u);
    zeroed.insert(r->u);
  } else {
    const NodeId u = std::get<FeatureRemoval>(item).u;
    ZeroFeature(data, u);
    zeroed.insert(u);
  }
}

// Retraining baseline replayed after the unlearning pass: exact embeddings
// of every intermediate graph, trained with noise epoch 0.
std::vector<double> BaselineAccuracies(
    const UnlearnFlags& f, const PropagationState& initial,
    const LinearModel& model, const std::vector<RemovalRequest>& applied) {
  Dataset data = LoadDataset(f.data.paths);
  std::set<NodeId> zeroed;
  std::vector<double> out;
  const auto test = [&] { return data.NodesInSplit(Split::kTest); };
  for (const RemovalRequest& request : applied) {
    for (const RemovalItem& item : request.items) ApplyItem(data, item, zeroed);
    Eigen::MatrixXd signal = initial.signal();
    for (NodeId u : zeroed) signal.row(u).setZero();
    const Eigen::MatrixXd z = ExactEmbeddings(data.graph, signal,
                                              initial.levels(),
                                              initial.weights());
    const LinearModel retrained =
        TrainOneVsAll(z, data.TrainRows(), data.store.labels,
                      data.num_classes, model.spec, model.alpha, model.seed);
    out.push_back(Accuracy(Predict(retrained, z), data.store.labels, test()));
  }
  return out;
}

int CmdUnlearn(const UnlearnFlags& f, std::ostream& out, std::ostream& err) {
  Dataset data = LoadDataset(f.data.paths);
  PropagationState state = PropagationState::Load(f.state);
  LinearModel model = LoadModel(f.model);
  const auto requests = LoadWorkload(f.workload);

  bool edges_only = true;
  for (const auto& r : requests) {
    for (const auto& item : r.items) {
      edges_only = edges_only && std::holds_alternative<EdgeRemoval>(item);
    }
  }
  const double default_delta =
      edges_only ? 1.0 / std::max<std::size_t>(1, data.graph.num_edges())
                 : 1.0 / std::max<NodeId>(1, data.num_nodes());
  EngineConfig config;
  config.propagation = state.config();
  config.loss = model.spec;
  config.alpha = model.alpha;
  config.epsilon = f.epsilon;
  config.delta = f.delta.value_or(default_delta);
  config.seed = model.seed;
  config.compute_true_residual = f.oracle_checks;

  const PropagationState initial = state;
  const LinearModel initial_model = model;
  Engine engine(std::move(data), config, std::move(state), std::move(model));

  std::vector<ReportRecord> records;
  std::vector<RemovalRequest> applied;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    StepReport step;
    try {
      step = engine.Process(requests[i]);
    } catch (const NotFoundError& e) {
      if (f.strict) throw;
      err << "skipping request " << i << ": " << e.what() << '\n';
      ++skipped;
      continue;
    } catch (const RangeError& e) {
      if (f.strict) throw;
      err << "skipping request " << i << ": " << e.what() << '\n';
      ++skipped;
      continue;
    }
    ReportRecord record = RecordFromStep(step, i);
    record.accuracy = engine.Accuracy(Split::kTest);
    records.push_back(std::move(record));
    applied.push_back(requests[i]);
  }

  std::optional<double> final_retrain;
  if (f.compare_retrain) {
    const auto baseline =
        BaselineAccuracies(f, initial, initial_model, applied);
    for (std::size_t i = 0; i < records.size(); ++i) {
      records[i].accuracy_retrain = baseline[i];
    }
    if (!baseline.empty()) final_retrain = baseline.back();
  }

  WriteTo(f.output, out, [&](std::ostream& s) {
    for (const auto& r : records) s << FormatRecord(r) << '\n';
  });

  double total = 0.0, prop = 0.0;
  for (const auto& r : records) {
    total += r.total_ms;
    prop += r.prop_ms;
  }
  const double k = records.empty() ? 1.0 : static_cast<double>(records.size());
  json summary = {{"requests", requests.size()},
                  {"processed", records.size()},
                  {"skipped", skipped},
                  {"mean_total_ms", total / k},
                  {"mean_prop_ms", prop / k},
                  {"retrains", engine.ledger().retrains()},
                  {"budget", engine.budget()},
                  {"delta", config.delta},
                  {"accuracy", AccuracyJson(engine)}};
  if (final_retrain) summary["accuracy_retrain_test"] = *final_retrain;
  if (!f.summary.empty()) {
    WriteTo(f.summary, out, [&](std::ostream& s) { s << summary.dump(2) << '\n'; });
  } else {
    err << summary.dump() << '\n';
  }
  return kOk;
}

int CmdGenWorkload(const GenFlags& f, std::ostream& out) {
  const Dataset data = LoadDataset(f.data.paths);
  WorkloadSpec spec;
  spec.kind = ParseWorkloadKind(f.kind);
  spec.count = f.count;
  spec.batch_size = f.batch_size;
  spec.seed = f.seed;
  spec.degree_threshold = f.degree_threshold;
  spec.target_pool = f.target_pool;
  if (spec.kind == WorkloadKind::kAdversarialEdges && f.augmented_edges.empty()) {
    throw ConfigError("adversarial-edges needs --augmented-edges");
  }
  const GeneratedWorkload w = GenerateWorkload(data, spec);
  WriteTo(f.output, out, [&](std::ostream& s) { WriteWorkload(s, w.requests); });
  if (w.augmented_edges) {
    WriteTo(f.augmented_edges, out,
            [&](std::ostream& s) { WriteEdgeList(s, *w.augmented_edges); });
    if (!f.targets.empty()) {
      WriteTo(f.targets, out, [&](std::ostream& s) {
        for (NodeId u : w.targets) s << u << '\n';
      });
    }
  }
  return kOk;
}

int CmdReport(const ReportFlags& f, std::ostream& out) {
  std::vector<ReportRecord> records;
  for (const auto& path : f.inputs) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");
    try {
      auto part = ParseRecords(in);
      records.insert(records.end(), part.begin(), part.end());
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what(), e.line());
    }
  }
  const bool any = !f.summary.empty() || !f.accuracy.empty() || !f.bounds.empty();
  if (!any || !f.summary.empty()) {
    WriteTo(f.summary, out, [&](std::ostream& s) { WriteSummaryCsv(s, records); });
  }
  if (!f.accuracy.empty()) {
    WriteTo(f.accuracy, out, [&](std::ostream& s) { WriteAccuracyCsv(s, records); });
  }
  if (!f.bounds.empty()) {
    WriteTo(f.bounds, out, [&](std::ostream& s) { WriteBoundTraceCsv(s, records); });
  }
  return kOk;
}

int CmdSynth(SynthFlags f) {
  if (f.prefix.empty()) throw ConfigError("--prefix is required");
  f.config.mode = ParseFeatureMode(f.mode);
  const Dataset data = MakeSynthetic(f.config);
  WriteDataset(data, {f.prefix + ".edges", f.prefix + ".features.csv",
                      f.prefix + ".labels", f.prefix + ".masks"});
  return kOk;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Certified graph unlearning on lazily propagated embeddings"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_config("--config", "", "key=value file; flags override it");
  app.config_formatter(std::make_shared<SubcommandConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);

  TrainFlags train;
  auto* train_cmd = app.add_subcommand("train", "propagate and train");
  train.data.Register(train_cmd);
  train_cmd->add_option("--levels", train.levels, "propagation depth L");
  train_cmd->add_option("--weights", train.weights, "w_0..w_L, comma separated")
      ->delimiter(',');
  train_cmd->add_option("--rmax", train.rmax, "push threshold");
  train_cmd->add_option("--lambda", train.lambda, "ridge weight")->required();
  train_cmd->add_option("--alpha", train.alpha, "noise standard deviation");
  train_cmd->add_option("--seed", train.seed);
  train_cmd->add_option("--loss", train.loss, "logistic or least_squares");
  train_cmd->add_option("--model", train.model, "model file to write");
  train_cmd->add_option("--state", train.state, "propagation snapshot to write");
  train_cmd->add_option("--output", train.output, "training report (JSON)");

  UnlearnFlags unlearn;
  auto* unlearn_cmd = app.add_subcommand("unlearn", "replay a removal workload");
  unlearn.data.Register(unlearn_cmd);
  unlearn_cmd->add_option("--model", unlearn.model)->required();
  unlearn_cmd->add_option("--state", unlearn.state)->required();
  unlearn_cmd->add_option("--workload", unlearn.workload)->required();
  unlearn_cmd->add_option("--epsilon", unlearn.epsilon);
  unlearn_cmd->add_option("--delta", unlearn.delta,
                          "default 1/#edges for edge workloads, else 1/#nodes");
  unlearn_cmd->add_option("--output", unlearn.output, "report stream (JSON lines)");
  unlearn_cmd->add_option("--summary", unlearn.summary, "summary (JSON)");
  unlearn_cmd->add_flag("--compare-retrain", unlearn.compare_retrain);
  unlearn_cmd->add_flag("--oracle-checks", unlearn.oracle_checks);
  unlearn_cmd->add_flag("--strict", unlearn.strict,
                        "abort on requests that cannot be applied");

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen-workload", "generate a removal workload");
  gen.data.Register(gen_cmd);
  gen_cmd->add_option("--kind", gen.kind,
                      "random-edges, vulnerable-edges, adversarial-edges, "
                      "random-nodes or random-features");
  gen_cmd->add_option("--count", gen.count)->required();
  gen_cmd->add_option("--batch-size", gen.batch_size);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--degree-threshold", gen.degree_threshold);
  gen_cmd->add_option("--target-pool", gen.target_pool);
  gen_cmd->add_option("--output", gen.output, "workload (JSON lines)")->required();
  gen_cmd->add_option("--augmented-edges", gen.augmented_edges);
  gen_cmd->add_option("--targets", gen.targets, "sampled target nodes");

  ReportFlags report;
  auto* report_cmd = app.add_subcommand("report", "aggregate report streams to CSV");
  report_cmd->add_option("--input", report.inputs)->required();
  report_cmd->add_option("--summary", report.summary);
  report_cmd->add_option("--accuracy", report.accuracy);
  report_cmd->add_option("--bounds", report.bounds);

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic dataset");
  synth_cmd->add_option("--num-nodes", synth.config.num_nodes);
  synth_cmd->add_option("--num-classes", synth.config.num_classes);
  synth_cmd->add_option("--num-features", synth.config.num_features);
  synth_cmd->add_option("--avg-degree", synth.config.avg_degree);
  synth_cmd->add_option("--homophily", synth.config.homophily);
  synth_cmd->add_option("--mode", synth.mode, "gaussian or sparse");
  synth_cmd->add_option("--train-fraction", synth.config.train_fraction);
  synth_cmd->add_option("--val-fraction", synth.config.val_fraction);
  synth_cmd->add_option("--seed", synth.config.seed);
  synth_cmd->add_option("--prefix", synth.prefix, "output path prefix");

  for (CLI::App* sub : app.get_subcommands({})) {
    sub->fallthrough();
    sub->allow_config_extras(CLI::config_extras_mode::error);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (train_cmd->parsed()) return CmdTrain(train, out);
    if (unlearn_cmd->parsed()) return CmdUnlearn(unlearn, out, err);
    if (gen_cmd->parsed()) return CmdGenWorkload(gen, out);
    if (report_cmd->parsed()) return CmdReport(report, out);
    return CmdSynth(synth);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kConfigError;
  } catch (const RangeError& e) {
    err << "parse error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace gunlearn::cli
