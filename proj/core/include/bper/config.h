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

// Experiment configuration. The file format is one `key = value` per line,
// `#` starts a comment, lists are comma-separated.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bper/dataset.h"
#include "bper/models.h"
#include "bper/params.h"
#include "bper/synthetic.h"

namespace bper {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  // Empty means: generate planted data from `synthetic`.
  std::string data;
  IdMode id_mode = IdMode::kRawStrings;
  std::string embeddings;
  std::string dataset_name;  // defaults to the data file stem
  std::string output_dir = "results";

  std::vector<ModelKind> models = {
      ModelKind::kRand, ModelKind::kRucf, ModelKind::kRicf, ModelKind::kCd,
      ModelKind::kPitf, ModelKind::kBper, ModelKind::kBperPlus};
  std::vector<ModelKind> joint_models = {ModelKind::kBperJ};
  std::vector<ModelKind> sparsity_models = {
      ModelKind::kPitf, ModelKind::kBper, ModelKind::kBperPlus};

  Hyperparams hp;
  double init_scale = 0.1;
  bool train_projection = true;
  SplitSpec split;

  std::vector<double> mu_sweep;
  std::vector<double> alpha_sweep;
  std::vector<double> sparsity_ratios;

  std::size_t top_n = 10;
  std::size_t top_m = 10;
  std::size_t neighbors_k = 50;
  std::size_t threads = 1;

  bool tune = false;
  std::vector<std::size_t> d_grid = {10, 20, 30, 40, 50};
  std::vector<double> lambda_grid = {0.001, 0.01, 0.1};
  std::vector<double> gamma_grid = {0.001, 0.01, 0.1};
  std::vector<std::size_t> epochs_grid = {100, 500, 1000};

  SyntheticSpec synthetic;

  ExperimentConfig();

  // Applies one `key = value` assignment. Throws ConfigError on an unknown
  // key or a malformed value.
  void Set(std::string_view key, std::string_view value);
  std::string Get(std::string_view key) const;
  static const std::vector<std::string>& Keys();

  // Throws ConfigError when an invariant is broken.
  void Validate() const;

  std::string DatasetName() const;
  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig ParseConfig(std::string_view text);
ExperimentConfig LoadConfig(const std::string& path);
std::string SerializeConfig(const ExperimentConfig& config);

// Shortest decimal text that reads back to the same double.
std::string FormatDouble(double x);

}  // namespace bper
