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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bper/dataset.h"
#include "bper/matrix.h"

namespace bper {

struct Hyperparams {
  std::size_t d = 20;
  double gamma = 0.01;   // learning rate
  double lambda = 0.01;  // L2 coefficient, applied per sampled parameter
  std::size_t epochs = 500;
  double mu = 0.7;       // inference-time user/item blend
  double alpha = 0.5;    // explanation-task weight in joint training
  std::uint64_t seed = 1;

  void Validate() const;
  bool operator==(const Hyperparams&) const = default;
};

// Parameters shared by BPER, BPER-J and PITF. PITF ignores the biases;
// `item_bias` is only trained by BPER-J.
struct FactorParams {
  Matrix user;               // P: users x d
  Matrix item;               // Q: items x d
  Matrix expl_user;          // O^U: explanations x d
  Matrix expl_item;          // O^I: explanations x d
  std::vector<double> expl_user_bias;  // b^U
  std::vector<double> expl_item_bias;  // b^I
  std::vector<double> item_bias;       // b (item ranking)

  std::size_t d() const { return user.cols(); }
  bool AllFinite() const;
  void CheckShape(const Universe& u) const;
  bool operator==(const FactorParams&) const = default;
};

// Canonical decomposition: one factor matrix per mode.
struct CDParams {
  Matrix user;
  Matrix item;
  Matrix expl;

  std::size_t d() const { return user.cols(); }
  bool AllFinite() const;
  void CheckShape(const Universe& u) const;
  bool operator==(const CDParams&) const = default;
};

// Frozen per-explanation semantic vectors plus the learnable linear layer
// mapping them into factor space: proj_e = weight * raw_e + bias.
struct EmbeddingTable {
  Matrix raw;                 // explanations x emb_dim, never trained
  Matrix weight;              // d x emb_dim
  std::vector<double> bias;   // d
  std::string tag;

  std::size_t emb_dim() const { return raw.cols(); }
  std::size_t d() const { return weight.rows(); }

  // Writes weight * raw_e + bias into `out` (length d).
  void Project(Index e, std::span<double> out) const;
  Matrix ProjectAll() const;
  bool AllFinite() const;
  bool operator==(const EmbeddingTable&) const = default;
};

struct BperPlusParams {
  FactorParams factors;
  EmbeddingTable embedding;

  bool operator==(const BperPlusParams&) const = default;
};

// Factors ~ N(0, init_scale^2) drawn in the order P, Q, O^U, O^I; biases 0.
FactorParams InitFactorParams(const Universe& universe, const Hyperparams& hp,
                              double init_scale = 0.1);
CDParams InitCDParams(const Universe& universe, const Hyperparams& hp,
                      double init_scale = 0.1);
// Sets up the projection for `d` factors: weight ~ N(0, init_scale^2 /
// emb_dim), bias = 1, so training starts near plain BPER.
void InitProjection(EmbeddingTable& emb, std::size_t d, std::uint64_t seed,
                    double init_scale = 0.1);

double ScoreUserExplanation(const FactorParams& fp, Index u, Index e);
double ScoreItemExplanation(const FactorParams& fp, Index i, Index e);
double ScoreBper(const FactorParams& fp, Index u, Index i, Index e, double mu);
double ScoreBperPlus(const FactorParams& fp, const EmbeddingTable& emb,
                     Index u, Index i, Index e, double mu);
// Same as ScoreBperPlus with a precomputed projection row.
double ScoreBperPlusProjected(const FactorParams& fp,
                              std::span<const double> proj, Index u, Index i,
                              Index e, double mu);
double ScoreCd(const CDParams& cd, Index u, Index i, Index e);
double ScorePitf(const FactorParams& fp, Index u, Index i, Index e);
// p_u . q_i + b_i
double ScoreItem(const FactorParams& fp, Index u, Index i);
// p_u . q_i, used by CD-J
double ScoreItem(const CDParams& cd, Index u, Index i);

// CD parameters of dimension 2d + 2 whose triple product reproduces
// ScoreBper(fp, ., ., ., mu) exactly. Slot layout for k in [0, 2d + 2):
//   user:  mu * p_k for k < d,  mu at 2d,      1 elsewhere
//   item:  (1 - mu) * q_{k-d} for d <= k < 2d, (1 - mu) at 2d + 1, 1 elsewhere
//   expl:  o^U_k | o^I_{k-d} | b^U | b^I
CDParams EmbedBperIntoCd(const FactorParams& fp, double mu);
// As above with the first 2d explanation slots scaled by the projection.
CDParams EmbedBperPlusIntoCd(const FactorParams& fp, const EmbeddingTable& emb,
                             double mu);

}  // namespace bper
