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

#include "bper/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "bper/random.h"

namespace bper {

namespace {

void FillGaussian(Matrix& m, double stddev, Rng& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (double& x : m.data()) x = dist(rng);
}

void FillGaussian(std::vector<double>& v, double stddev, Rng& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (double& x : v) x = dist(rng);
}

// Indices of the k largest values, ties to the lower index.
std::vector<Index> TopK(const std::vector<double>& values, std::size_t k) {
  std::vector<Index> idx(values.size());
  std::iota(idx.begin(), idx.end(), Index{0});
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(),
                    [&](Index a, Index b) {
                      if (values[a] != values[b]) return values[a] > values[b];
                      return a < b;
                    });
  idx.resize(k);
  return idx;
}

}  // namespace

void SyntheticSpec::Validate() const {
  if (num_users < 1 || num_items < 1 || num_explanations < 1 || d_true < 1 ||
      records_per_user < 1 || explanations_per_record < 1 ||
      embedding_dim < 1) {
    throw std::invalid_argument("synthetic counts must be at least 1");
  }
  if (records_per_user > num_items) {
    throw std::invalid_argument("records_per_user exceeds num_items");
  }
  if (explanations_per_record > num_explanations) {
    throw std::invalid_argument(
        "explanations_per_record exceeds num_explanations");
  }
  if (!(noise >= 0.0 && noise < 1.0)) {
    throw std::invalid_argument("noise must lie in [0, 1)");
  }
  if (!(mu_true >= 0.0 && mu_true <= 1.0)) {
    throw std::invalid_argument("mu_true must lie in [0, 1]");
  }
  if (!(user_signal > 0.0) || !(bias_scale >= 0.0) ||
      !(item_temperature >= 0.0) || !(embedding_noise >= 0.0)) {
    throw std::invalid_argument("synthetic scales must be non-negative");
  }
}

SyntheticData GenerateSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  const std::size_t d = spec.d_true;
  const double unit = 1.0 / std::sqrt(static_cast<double>(d));

  Rng rng = MakeRng(spec.seed, 0x5f47);
  FactorParams truth;
  truth.user = Matrix(spec.num_users, d);
  truth.item = Matrix(spec.num_items, d);
  truth.expl_user = Matrix(spec.num_explanations, d);
  truth.expl_item = Matrix(spec.num_explanations, d);
  truth.expl_user_bias.resize(spec.num_explanations);
  truth.expl_item_bias.resize(spec.num_explanations);
  truth.item_bias.resize(spec.num_items);
  FillGaussian(truth.user, std::sqrt(spec.user_signal), rng);
  FillGaussian(truth.item, 1.0, rng);
  FillGaussian(truth.expl_user, std::sqrt(spec.user_signal) * unit, rng);
  FillGaussian(truth.expl_item, unit, rng);
  FillGaussian(truth.expl_user_bias, spec.bias_scale, rng);
  FillGaussian(truth.expl_item_bias, spec.bias_scale, rng);
  FillGaussian(truth.item_bias, spec.bias_scale, rng);

  std::extreme_value_distribution<double> gumbel(0.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<Index> any_expl(
      0, static_cast<Index>(spec.num_explanations - 1));

  std::vector<TripleRecord> records;
  std::vector<TripleRecord> planted;
  records.reserve(spec.num_users * spec.records_per_user);
  planted.reserve(spec.num_users * spec.records_per_user);
  std::vector<double> item_scores(spec.num_items);
  std::vector<double> expl_scores(spec.num_explanations);
  for (Index u = 0; u < spec.num_users; ++u) {
    for (Index i = 0; i < spec.num_items; ++i) {
      double s = (Dot(truth.user.row(u), truth.item.row(i)) * unit +
                  truth.item_bias[i]);
      if (spec.item_temperature > 0.0) {
        s = s / spec.item_temperature + gumbel(rng);
      }
      item_scores[i] = s;
    }
    std::vector<Index> items = TopK(item_scores, spec.records_per_user);
    std::sort(items.begin(), items.end());
    for (Index i : items) {
      for (Index e = 0; e < spec.num_explanations; ++e) {
        expl_scores[e] = ScoreBper(truth, u, i, e, spec.mu_true);
      }
      std::vector<Index> expls = TopK(expl_scores, spec.explanations_per_record);
      std::vector<Index> clean = expls;
      std::sort(clean.begin(), clean.end());
      planted.push_back({u, i, std::move(clean)});
      for (Index& e : expls) {
        if (coin(rng) < spec.noise) e = any_expl(rng);
      }
      std::sort(expls.begin(), expls.end());
      expls.erase(std::unique(expls.begin(), expls.end()), expls.end());
      records.push_back({u, i, std::move(expls)});
    }
  }

  // Raw text-like embeddings: a fixed random mix of the true explanation
  // factors plus isotropic noise, rounded to float.
  const std::size_t src = 2 * d + 2;
  Matrix mix(spec.embedding_dim, src);
  FillGaussian(mix, 1.0 / std::sqrt(static_cast<double>(src)), rng);
  std::normal_distribution<double> jitter(0.0, spec.embedding_noise);
  EmbeddingFile emb;
  emb.tag = "synthetic";
  emb.rows = Matrix(spec.num_explanations, spec.embedding_dim);
  std::vector<double> feature(src);
  for (Index e = 0; e < spec.num_explanations; ++e) {
    auto ou = truth.expl_user.row(e);
    auto oi = truth.expl_item.row(e);
    std::copy(ou.begin(), ou.end(), feature.begin());
    std::copy(oi.begin(), oi.end(), feature.begin() + d);
    feature[2 * d] = truth.expl_user_bias[e];
    feature[2 * d + 1] = truth.expl_item_bias[e];
    for (std::size_t k = 0; k < spec.embedding_dim; ++k) {
      double v = Dot(mix.row(k), feature) + jitter(rng);
      emb.rows(e, k) = static_cast<double>(static_cast<float>(v));
    }
  }

  Universe universe{spec.num_users, spec.num_items, spec.num_explanations};
  return {InteractionStore::FromRecords(std::move(records), universe),
          InteractionStore::FromRecords(std::move(planted), universe),
          std::move(truth), spec.mu_true, std::move(emb)};
}

}  // namespace bper
