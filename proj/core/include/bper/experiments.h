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

// Experiment pipelines. Every pipeline emits long-format CSV rows
//
//   dataset,model,repetition,hyperparams,metric,value
//
// where `repetition` is a 0-based split index or "mean", `hyperparams` is a
// `;`-separated list of key=value pairs and `value` has 6 significant digits.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bper/config.h"
#include "bper/dataset.h"
#include "bper/models.h"
#include "bper/params.h"

namespace bper {

struct CsvRow {
  std::string dataset;
  std::string model;
  std::string repetition;
  std::string hyperparams;
  std::string metric;
  double value = 0.0;

  bool operator==(const CsvRow&) const = default;
};

struct ExperimentResult {
  std::vector<CsvRow> rows;
  std::size_t training_runs = 0;
  std::size_t reference_runs = 0;  // non-joint baselines of the alpha sweep
};

struct ExperimentData {
  InteractionStore store;
  std::optional<EmbeddingTable> embedding;
  std::string name;
};

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::string_view kCsvHeader =
    "dataset,model,repetition,hyperparams,metric,value";

std::string FormatValue(double v);  // 6 significant digits
std::string FormatCsv(const std::vector<CsvRow>& rows);
std::vector<CsvRow> ParseCsv(std::string_view text);
void WriteCsv(const std::string& path, const std::vector<CsvRow>& rows);

// Planted data when `config.data` is empty, otherwise the triples file and
// optional embedding file named by the config.
ExperimentData LoadExperimentData(const ExperimentConfig& config);

// Appends one "mean" row per (model, hyperparams, metric) group, averaging
// the per-repetition rows in first-appearance order.
void AppendMeans(std::vector<CsvRow>& rows);

// Trains on train-minus-validation for every grid point and returns the
// point with the best validation F1@top_n. BPER-family models also pick mu
// from the config's mu sweep.
Hyperparams SelectHyperparams(ModelKind kind, const Split& split,
                              const ExperimentConfig& config,
                              const ExperimentData& data,
                              std::size_t* training_runs = nullptr);

ExperimentResult RunComparison(const ExperimentConfig& config,
                               const ExperimentData& data,
                               std::ostream* log = nullptr);
ExperimentResult RunMuSweep(const ExperimentConfig& config,
                            const ExperimentData& data,
                            std::ostream* log = nullptr);
ExperimentResult RunAlphaSweep(const ExperimentConfig& config,
                               const ExperimentData& data,
                               std::ostream* log = nullptr);
ExperimentResult RunSparsity(const ExperimentConfig& config,
                             const ExperimentData& data,
                             std::ostream* log = nullptr);

// Reads comparison.csv, mu_sweep.csv, alpha_sweep.csv and sparsity.csv
// from `csv_dir` (whichever exist) and writes summary.txt plus columnar
// .dat curves next to them. Returns the paths written.
std::vector<std::string> WriteReport(const std::string& csv_dir);

}  // namespace bper
