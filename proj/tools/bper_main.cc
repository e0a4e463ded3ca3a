// Copyright 2026 The BPER Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// bper: command-line front end for splitting, training, evaluation and the
// experiment pipelines. Results go to stdout or files, progress to stderr.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bper/config.h"
#include "bper/dataset.h"
#include "bper/eval.h"
#include "bper/experiments.h"
#include "bper/io.h"
#include "bper/models.h"
#include "bper/synthetic.h"

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config_path;
  std::map<std::string, std::string> overrides;
  bool quiet = false;
};

// Every config key becomes a --key flag on `cmd`.
void AddConfigFlags(CLI::App* cmd, Common& common) {
  cmd->add_option("-c,--config", common.config_path, "Config file");
  cmd->add_flag("-q,--quiet", common.quiet, "Suppress progress output");
  for (const auto& key : bper::ExperimentConfig::Keys()) {
    cmd->add_option_function<std::string>(
        "--" + key,
        [&common, key](const std::string& v) { common.overrides[key] = v; },
        "Override config key '" + key + "'");
  }
}

bper::ExperimentConfig ResolveConfig(const Common& common) {
  bper::ExperimentConfig config =
      common.config_path.empty() ? bper::ExperimentConfig()
                                 : bper::LoadConfig(common.config_path);
  for (const auto& [key, value] : common.overrides) config.Set(key, value);
  config.Validate();
  return config;
}

std::ostream* Progress(const Common& common) {
  return common.quiet ? nullptr : &std::cerr;
}

bper::ModelKind FirstModel(const bper::ExperimentConfig& config) {
  return config.models.front();
}

void PrintMetrics(const std::string& label, const bper::MetricsReport& r) {
  std::cout << label << " ndcg=" << bper::FormatValue(r.ndcg)
            << " precision=" << bper::FormatValue(r.precision)
            << " recall=" << bper::FormatValue(r.recall)
            << " f1=" << bper::FormatValue(r.f1) << " units=" << r.unit_count
            << '\n';
}

std::string OutputPath(const bper::ExperimentConfig& config,
                       const std::string& name) {
  fs::create_directories(config.output_dir);
  return (fs::path(config.output_dir) / name).string();
}

int RunSplit(const Common& common, int only_rep) {
  auto config = ResolveConfig(common);
  std::vector<int> reps;
  if (only_rep >= 0) {
    reps.push_back(only_rep);
  } else {
    for (int r = 0; r < config.split.repetitions; ++r) reps.push_back(r);
  }
  bper::InteractionStore store;
  if (config.data.empty()) {
    store = bper::LoadExperimentData(config).store;
  } else {
    auto loaded = bper::LoadTriples(config.data, config.id_mode);
    if (loaded.duplicate_lines > 0) {
      std::cerr << "warning: " << loaded.duplicate_lines
                << " duplicate triple lines ignored\n";
    }
    if (config.id_mode == bper::IdMode::kRawStrings) {
      bper::SaveIdMap(loaded.users, OutputPath(config, "users.tsv"));
      bper::SaveIdMap(loaded.items, OutputPath(config, "items.tsv"));
      bper::SaveIdMap(loaded.explanations,
                      OutputPath(config, "explanations.tsv"));
    }
    store = std::move(loaded.store);
  }
  for (int rep : reps) {
    auto split = bper::SplitStore(store, config.split, rep);
    const std::string dir =
        (fs::path(config.output_dir) / ("split_" + std::to_string(rep)))
            .string();
    fs::create_directories(dir);
    bper::SaveTriples(split.train, dir + "/train.tsv");
    bper::SaveTriples(split.validation, dir + "/validation.tsv");
    bper::SaveTriples(split.test, dir + "/test.tsv");
    std::cout << dir << " train=" << split.train.record_count()
              << " validation=" << split.validation.record_count()
              << " test=" << split.test.record_count()
              << " repaired=" << split.repaired << '\n';
  }
  return 0;
}

int RunTrain(const Common& common, int rep, std::string out) {
  auto config = ResolveConfig(common);
  const bper::ModelKind kind = FirstModel(config);
  if (!bper::IsTrained(kind)) {
    throw std::runtime_error(bper::ModelName(kind) +
                             " has no trainable parameters");
  }
  auto data = bper::LoadExperimentData(config);
  auto split = bper::SplitStore(data.store, config.split, rep);
  const auto train = split.FullTrain();
  bper::FitOptions opts;
  opts.train.init_scale = config.init_scale;
  opts.train.train_projection = config.train_projection;
  opts.train.progress = Progress(common);
  opts.neighbors_k = config.neighbors_k;
  if (data.embedding) opts.embedding = &*data.embedding;
  auto model = bper::Fit(kind, train, config.hp, opts);
  if (out.empty()) out = OutputPath(config, bper::ModelName(kind) + ".ckpt");
  bper::SaveCheckpoint(out, model.ToCheckpoint());
  for (const auto& note : model.report()->notes) {
    std::cerr << "note: " << note << '\n';
  }
  std::cout << out << '\n';
  return 0;
}

int RunEval(const Common& common, int rep, const std::string& checkpoint) {
  auto config = ResolveConfig(common);
  auto data = bper::LoadExperimentData(config);
  auto split = bper::SplitStore(data.store, config.split, rep);
  const auto train = split.FullTrain();
  std::optional<bper::FittedModel> model;
  if (!checkpoint.empty()) {
    model.emplace(bper::FromCheckpoint(bper::LoadCheckpoint(checkpoint), train,
                                       config.hp));
  } else {
    const bper::ModelKind kind = FirstModel(config);
    if (bper::IsTrained(kind)) {
      throw std::runtime_error("eval of " + bper::ModelName(kind) +
                               " needs --checkpoint");
    }
    bper::FitOptions opts;
    opts.neighbors_k = config.neighbors_k;
    model.emplace(bper::Fit(kind, train, config.hp, opts));
  }
  const bper::EvalOptions eval{config.threads};
  const std::string name = bper::ModelName(model->kind());
  PrintMetrics(name + " explanation@" + std::to_string(config.top_n),
               bper::EvaluateExplanationRanking(*model->ExplanationScorerFor(),
                                                split.test, config.top_n,
                                                eval));
  if (bper::IsJoint(model->kind())) {
    auto joint = bper::EvaluateJoint(*model->ItemScorerFor(),
                                     *model->ExplanationScorerFor(), train,
                                     split.test, config.top_m, config.top_n,
                                     eval);
    PrintMetrics(name + " joint-recommendation@" + std::to_string(config.top_m),
                 joint.recommendation);
    if (joint.explanation.empty()) {
      std::cout << name << " joint-explanation: no hit pairs\n";
    } else {
      PrintMetrics(name + " joint-explanation@" + std::to_string(config.top_n),
                   joint.explanation);
    }
  }
  return 0;
}

using Pipeline = bper::ExperimentResult (*)(const bper::ExperimentConfig&,
                                            const bper::ExperimentData&,
                                            std::ostream*);

int RunPipeline(const Common& common, Pipeline pipeline,
                const std::string& csv_name) {
  auto config = ResolveConfig(common);
  auto data = bper::LoadExperimentData(config);
  auto result = pipeline(config, data, Progress(common));
  const std::string path = OutputPath(config, csv_name);
  bper::WriteCsv(path, result.rows);
  std::cout << path << '\n';
  return 0;
}

int RunSynth(const Common& common) {
  auto config = ResolveConfig(common);
  auto syn = bper::GenerateSynthetic(config.synthetic);
  const std::string triples = OutputPath(config, "synthetic.tsv");
  bper::SaveTriples(syn.store, triples);
  bper::WriteEmbeddingFile(OutputPath(config, "synthetic_embeddings.bin"),
                           syn.embeddings);
  bper::SaveCheckpoint(OutputPath(config, "synthetic_truth.ckpt"),
                       {"bper", syn.truth});
  std::cout << triples << " records=" << syn.store.record_count()
            << " triples=" << syn.store.triple_count() << '\n';
  return 0;
}

int RunReport(const Common& common, std::string dir) {
  if (dir.empty()) dir = ResolveConfig(common).output_dir;
  for (const auto& path : bper::WriteReport(dir)) std::cout << path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explanation ranking for recommendation"};
  app.require_subcommand(1);

  Common common;
  int rep = -1;
  int train_rep = 0;
  std::string out;
  std::string checkpoint;
  std::string report_dir;

  auto* split = app.add_subcommand("split", "Write train/validation/test splits");
  AddConfigFlags(split, common);
  split->add_option("--repetition", rep, "Only this repetition (default all)");

  auto* train = app.add_subcommand("train", "Train the first configured model");
  AddConfigFlags(train, common);
  train->add_option("--repetition", train_rep, "Split repetition")
      ->capture_default_str();
  train->add_option("-o,--out", out, "Checkpoint path");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a test split");
  AddConfigFlags(eval, common);
  eval->add_option("--repetition", train_rep, "Split repetition")
      ->capture_default_str();
  eval->add_option("--checkpoint", checkpoint, "Checkpoint from `train`");

  auto* compare = app.add_subcommand("compare", "Main model comparison");
  AddConfigFlags(compare, common);
  auto* sweep_mu = app.add_subcommand("sweep-mu", "Inference-time mu sweep");
  AddConfigFlags(sweep_mu, common);
  auto* sweep_alpha = app.add_subcommand("sweep-alpha", "Joint-ranking alpha sweep");
  AddConfigFlags(sweep_alpha, common);
  auto* sparsity = app.add_subcommand("sparsity", "Training-ratio ablation");
  AddConfigFlags(sparsity, common);
  auto* synth = app.add_subcommand("synth", "Write planted synthetic data");
  AddConfigFlags(synth, common);
  auto* report = app.add_subcommand("report", "Summaries and curve files from CSVs");
  AddConfigFlags(report, common);
  report->add_option("--dir", report_dir, "Directory holding result CSVs");
  auto* show = app.add_subcommand("config", "Print the effective config");
  AddConfigFlags(show, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*split) return RunSplit(common, rep);
    if (*train) return RunTrain(common, train_rep, out);
    if (*eval) return RunEval(common, train_rep, checkpoint);
    if (*compare) return RunPipeline(common, bper::RunComparison, "comparison.csv");
    if (*sweep_mu) return RunPipeline(common, bper::RunMuSweep, "mu_sweep.csv");
    if (*sweep_alpha) {
      return RunPipeline(common, bper::RunAlphaSweep, "alpha_sweep.csv");
    }
    if (*sparsity) return RunPipeline(common, bper::RunSparsity, "sparsity.csv");
    if (*synth) return RunSynth(common);
    if (*report) return RunReport(common, report_dir);
    if (*show) {
      std::cout << bper::SerializeConfig(ResolveConfig(common));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "bper: error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
