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

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "bper/baselines.h"
#include "bper/eval.h"
#include "bper/io.h"
#include "bper/params.h"
#include "bper/training.h"

namespace bper {

enum class ModelKind {
  kRand,
  kRucf,
  kRicf,
  kCd,
  kPitf,
  kBper,
  kBperPlus,
  kCdJ,
  kPitfJ,
  kBperJ,
};

std::optional<ModelKind> ParseModelKind(std::string_view name);
std::string ModelName(ModelKind kind);
bool IsJoint(ModelKind kind);
bool IsTrained(ModelKind kind);  // has SGD-trained parameters
// Explanation-only counterpart of a joint model (bper-j -> bper, ...).
ModelKind NonJointCounterpart(ModelKind kind);

struct FitOptions {
  TrainOptions train;
  std::size_t neighbors_k = 50;
  // Required for bper+.
  const EmbeddingTable* embedding = nullptr;
};

// A model ready to rank. Scorers returned by this object borrow its
// parameters and the training store, so both must outlive them.
class FittedModel {
 public:
  FittedModel(ModelKind kind, Hyperparams hp, const InteractionStore& train)
      : kind_(kind), hp_(hp), train_(&train) {}

  ModelKind kind() const { return kind_; }
  const Hyperparams& hyperparams() const { return hp_; }
  const std::optional<ModelParams>& params() const { return params_; }
  const std::optional<TrainReport>& report() const { return report_; }

  void set_params(ModelParams params) { params_ = std::move(params); }
  void set_report(TrainReport report) { report_ = std::move(report); }
  void set_neighbors_k(std::size_t k) { neighbors_k_ = k; }

  // `mu` is only used by the BPER family.
  std::unique_ptr<ExplanationScorer> ExplanationScorerFor(double mu) const;
  std::unique_ptr<ExplanationScorer> ExplanationScorerFor() const {
    return ExplanationScorerFor(hp_.mu);
  }
  // Joint models only.
  std::unique_ptr<ItemScorer> ItemScorerFor() const;

  Checkpoint ToCheckpoint() const;

 private:
  ModelKind kind_;
  Hyperparams hp_;
  const InteractionStore* train_;
  std::size_t neighbors_k_ = 50;
  std::optional<ModelParams> params_;
  std::optional<TrainReport> report_;
};

// Trains (or indexes) `kind` on `train`.
FittedModel Fit(ModelKind kind, const InteractionStore& train,
                const Hyperparams& hp, const FitOptions& opts = {});

// Rebuilds a trained model from a checkpoint.
FittedModel FromCheckpoint(const Checkpoint& ckpt,
                           const InteractionStore& train,
                           const Hyperparams& hp);

}  // namespace bper
