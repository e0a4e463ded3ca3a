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

#include "bper/models.h"

#include <array>
#include <stdexcept>
#include <utility>

namespace bper {

namespace {

constexpr std::array<std::pair<ModelKind, std::string_view>, 10> kNames{{
    {ModelKind::kRand, "rand"},
    {ModelKind::kRucf, "rucf"},
    {ModelKind::kRicf, "ricf"},
    {ModelKind::kCd, "cd"},
    {ModelKind::kPitf, "pitf"},
    {ModelKind::kBper, "bper"},
    {ModelKind::kBperPlus, "bper+"},
    {ModelKind::kCdJ, "cd-j"},
    {ModelKind::kPitfJ, "pitf-j"},
    {ModelKind::kBperJ, "bper-j"},
}};

class BperScorer : public ExplanationScorer {
 public:
  BperScorer(const FactorParams& fp, double mu) : fp_(fp), mu_(mu) {}
  std::size_t num_explanations() const override {
    return fp_.expl_user.rows();
  }
  void Score(Index u, Index i, std::span<double> out) const override {
    auto p = fp_.user.row(u);
    auto q = fp_.item.row(i);
    for (std::size_t e = 0; e < out.size(); ++e) {
      double user_score = Dot(p, fp_.expl_user.row(e)) + fp_.expl_user_bias[e];
      double item_score = Dot(q, fp_.expl_item.row(e)) + fp_.expl_item_bias[e];
      out[e] = mu_ * user_score + (1.0 - mu_) * item_score;
    }
  }

 private:
  const FactorParams& fp_;
  double mu_;
};

class BperPlusScorer : public ExplanationScorer {
 public:
  BperPlusScorer(const BperPlusParams& bp, double mu)
      : bp_(bp), proj_(bp.embedding.ProjectAll()), mu_(mu) {}
  std::size_t num_explanations() const override {
    return bp_.factors.expl_user.rows();
  }
  void Score(Index u, Index i, std::span<double> out) const override {
    for (std::size_t e = 0; e < out.size(); ++e) {
      out[e] = ScoreBperPlusProjected(bp_.factors, proj_.row(e), u, i,
                                      static_cast<Index>(e), mu_);
    }
  }

 private:
  const BperPlusParams& bp_;
  Matrix proj_;
  double mu_;
};

class PitfScorer : public ExplanationScorer {
 public:
  explicit PitfScorer(const FactorParams& fp) : fp_(fp) {}
  std::size_t num_explanations() const override {
    return fp_.expl_user.rows();
  }
  void Score(Index u, Index i, std::span<double> out) const override {
    auto p = fp_.user.row(u);
    auto q = fp_.item.row(i);
    for (std::size_t e = 0; e < out.size(); ++e) {
      out[e] = Dot(p, fp_.expl_user.row(e)) + Dot(q, fp_.expl_item.row(e));
    }
  }

 private:
  const FactorParams& fp_;
};

class CdScorer : public ExplanationScorer {
 public:
  explicit CdScorer(const CDParams& cd) : cd_(cd) {}
  std::size_t num_explanations() const override { return cd_.expl.rows(); }
  void Score(Index u, Index i, std::span<double> out) const override {
    for (std::size_t e = 0; e < out.size(); ++e) {
      out[e] = ScoreCd(cd_, u, i, static_cast<Index>(e));
    }
  }

 private:
  const CDParams& cd_;
};

class FactorItemScorer : public ItemScorer {
 public:
  explicit FactorItemScorer(const FactorParams& fp) : fp_(fp) {}
  std::size_t num_items() const override { return fp_.item.rows(); }
  void Score(Index u, std::span<double> out) const override {
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = ScoreItem(fp_, u, static_cast<Index>(i));
    }
  }

 private:
  const FactorParams& fp_;
};

class CdItemScorer : public ItemScorer {
 public:
  explicit CdItemScorer(const CDParams& cd) : cd_(cd) {}
  std::size_t num_items() const override { return cd_.item.rows(); }
  void Score(Index u, std::span<double> out) const override {
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = ScoreItem(cd_, u, static_cast<Index>(i));
    }
  }

 private:
  const CDParams& cd_;
};

}  // namespace

std::optional<ModelKind> ParseModelKind(std::string_view name) {
  for (const auto& [kind, text] : kNames) {
    if (text == name) return kind;
  }
  return std::nullopt;
}

std::string ModelName(ModelKind kind) {
  for (const auto& [k, text] : kNames) {
    if (k == kind) return std::string(text);
  }
  return "unknown";
}

bool IsJoint(ModelKind kind) {
  return kind == ModelKind::kCdJ || kind == ModelKind::kPitfJ ||
         kind == ModelKind::kBperJ;
}

bool IsTrained(ModelKind kind) {
  return kind != ModelKind::kRand && kind != ModelKind::kRucf &&
         kind != ModelKind::kRicf;
}

ModelKind NonJointCounterpart(ModelKind kind) {
  switch (kind) {
    case ModelKind::kCdJ:
      return ModelKind::kCd;
    case ModelKind::kPitfJ:
      return ModelKind::kPitf;
    case ModelKind::kBperJ:
      return ModelKind::kBper;
    default:
      return kind;
  }
}

std::unique_ptr<ExplanationScorer> FittedModel::ExplanationScorerFor(
    double mu) const {
  const std::size_t n_expl = train_->num_explanations();
  switch (kind_) {
    case ModelKind::kRand:
      return std::make_unique<RandomScorer>(n_expl, hp_.seed);
    case ModelKind::kRucf:
      return std::make_unique<RucfScorer>(*train_, neighbors_k_);
    case ModelKind::kRicf:
      return std::make_unique<RicfScorer>(*train_, neighbors_k_);
    default:
      break;
  }
  if (!params_) throw std::logic_error("model has no parameters");
  switch (kind_) {
    case ModelKind::kCd:
    case ModelKind::kCdJ:
      return std::make_unique<CdScorer>(std::get<CDParams>(*params_));
    case ModelKind::kPitf:
    case ModelKind::kPitfJ:
      return std::make_unique<PitfScorer>(std::get<FactorParams>(*params_));
    case ModelKind::kBper:
    case ModelKind::kBperJ:
      return std::make_unique<BperScorer>(std::get<FactorParams>(*params_),
                                          mu);
    case ModelKind::kBperPlus:
      return std::make_unique<BperPlusScorer>(
          std::get<BperPlusParams>(*params_), mu);
    default:
      throw std::logic_error("unhandled model kind");
  }
}

std::unique_ptr<ItemScorer> FittedModel::ItemScorerFor() const {
  if (!IsJoint(kind_) || !params_) {
    throw std::logic_error(ModelName(kind_) + " does not rank items");
  }
  if (kind_ == ModelKind::kCdJ) {
    return std::make_unique<CdItemScorer>(std::get<CDParams>(*params_));
  }
  return std::make_unique<FactorItemScorer>(std::get<FactorParams>(*params_));
}

Checkpoint FittedModel::ToCheckpoint() const {
  if (!params_) {
    throw std::logic_error(ModelName(kind_) + " has nothing to checkpoint");
  }
  return {ModelName(kind_), *params_};
}

FittedModel Fit(ModelKind kind, const InteractionStore& train,
                const Hyperparams& hp, const FitOptions& opts) {
  FittedModel model(kind, hp, train);
  model.set_neighbors_k(opts.neighbors_k);
  std::optional<TrainReport> report;
  switch (kind) {
    case ModelKind::kRand:
    case ModelKind::kRucf:
    case ModelKind::kRicf:
      return model;
    case ModelKind::kCd:
      report = TrainCd(train, hp, opts.train);
      break;
    case ModelKind::kPitf:
      report = TrainPitf(train, hp, opts.train);
      break;
    case ModelKind::kBper:
      report = TrainBper(train, hp, opts.train);
      break;
    case ModelKind::kBperPlus:
      if (!opts.embedding) {
        throw std::invalid_argument("bper+ requires an embedding file");
      }
      report = TrainBperPlus(train, hp, *opts.embedding, opts.train);
      break;
    case ModelKind::kCdJ:
      report = TrainCdJ(train, hp, opts.train);
      break;
    case ModelKind::kPitfJ:
      report = TrainPitfJ(train, hp, opts.train);
      break;
    case ModelKind::kBperJ:
      report = TrainBperJ(train, hp, opts.train);
      break;
  }
  model.set_params(report->final_params);
  model.set_report(std::move(*report));
  return model;
}

FittedModel FromCheckpoint(const Checkpoint& ckpt,
                           const InteractionStore& train,
                           const Hyperparams& hp) {
  auto kind = ParseModelKind(ckpt.model);
  if (!kind || !IsTrained(*kind)) {
    throw DataError("checkpoint holds unknown model '" + ckpt.model + "'");
  }
  const bool want_cd = *kind == ModelKind::kCd || *kind == ModelKind::kCdJ;
  const bool want_plus = *kind == ModelKind::kBperPlus;
  if (want_cd != std::holds_alternative<CDParams>(ckpt.params) ||
      want_plus != std::holds_alternative<BperPlusParams>(ckpt.params)) {
    throw DataError("checkpoint parameters do not match model " + ckpt.model);
  }
  std::visit(
      [&](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>,
                                     BperPlusParams>) {
          p.factors.CheckShape(train.universe());
        } else {
          p.CheckShape(train.universe());
        }
      },
      ckpt.params);
  FittedModel model(*kind, hp, train);
  model.set_params(ckpt.params);
  return model;
}

}  // namespace bper
