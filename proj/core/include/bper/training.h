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

// Stochastic gradient trainers for the factorization models.
//
// Every trainer runs `epochs` passes of |T| sampled steps. A step draws a
// training triple (u, i, e) uniformly, then the negatives its objective
// needs, and updates only the parameters the sample touches (including
// their L2 decay). Runs are bit-reproducible given Hyperparams::seed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bper/dataset.h"
#include "bper/io.h"
#include "bper/params.h"

namespace bper {

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerically stable logistic function.
inline double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double z = std::exp(x);
  return z / (1.0 + z);
}

// -ln sigma(x), computed without overflow.
inline double NegLogSigmoid(double x) {
  return std::log1p(std::exp(-std::abs(x))) + std::max(-x, 0.0);
}

struct TrainOptions {
  double init_scale = 0.1;
  // BPER+ only: when false the projection (weight, bias) stays fixed.
  bool train_projection = true;
  // Per-epoch progress lines; nullptr keeps training silent.
  std::ostream* progress = nullptr;
};

struct TrainReport {
  std::vector<double> epoch_losses;   // mean sampled loss of each epoch
  std::vector<double> epoch_seconds;
  std::size_t skipped_samples = 0;    // empty complement set
  std::vector<std::string> notes;
  ModelParams final_params;
};

// (u, i, e) with e' from E \ E_u and e'' from E \ E_i.
struct ExplanationSample {
  Index user, item, expl, expl_user_neg, expl_item_neg;
};
// Adds i' from I \ I_u.
struct JointSample {
  ExplanationSample expl;
  Index item_neg;
};
// (u, i, e) with a single negative e' from E \ E_ui.
struct TripleSample {
  Index user, item, expl, expl_neg;
};
struct TripleJointSample {
  TripleSample expl;
  Index item_neg;
};

// Single SGD steps. Each returns the sampled loss before the update.
// BPER and BPER-J apply their listed update rules in order, so later rules
// see parameters already changed by earlier ones within the same step.
double BperStep(FactorParams& fp, const ExplanationSample& s, double gamma,
                double lambda);
double BperJStep(FactorParams& fp, const JointSample& s, double gamma,
                 double lambda, double alpha);
// The shared projection (W, c) is decayed with `projection_lambda`; the
// trainer passes lambda / |T| so it is penalized once per epoch overall.
double BperPlusStep(BperPlusParams& bp, const ExplanationSample& s,
                    double gamma, double lambda, bool train_projection,
                    double projection_lambda);
// CD/PITF and their joint variants compute every gradient from the
// pre-step parameters.
double CdStep(CDParams& cd, const TripleSample& s, double gamma, double lambda);
double PitfStep(FactorParams& fp, const TripleSample& s, double gamma,
                double lambda);
double CdJStep(CDParams& cd, const TripleJointSample& s, double gamma,
               double lambda, double alpha);
double PitfJStep(FactorParams& fp, const TripleJointSample& s, double gamma,
                 double lambda, double alpha);

TrainReport TrainBper(const InteractionStore& train, const Hyperparams& hp,
                      const TrainOptions& opts = {});
TrainReport TrainBperJ(const InteractionStore& train, const Hyperparams& hp,
                       const TrainOptions& opts = {});
TrainReport TrainCd(const InteractionStore& train, const Hyperparams& hp,
                    const TrainOptions& opts = {});
TrainReport TrainPitf(const InteractionStore& train, const Hyperparams& hp,
                      const TrainOptions& opts = {});
TrainReport TrainCdJ(const InteractionStore& train, const Hyperparams& hp,
                     const TrainOptions& opts = {});
TrainReport TrainPitfJ(const InteractionStore& train, const Hyperparams& hp,
                       const TrainOptions& opts = {});
// If `emb.weight` is empty the projection is initialized with
// InitProjection; otherwise the given projection is the starting point.
TrainReport TrainBperPlus(const InteractionStore& train, const Hyperparams& hp,
                          EmbeddingTable emb, const TrainOptions& opts = {});

}  // namespace bper
