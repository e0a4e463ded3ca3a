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

// Planted user-item-explanation data drawn from known BPER factors.

#pragma once

#include <cstddef>
#include <cstdint>

#include "bper/dataset.h"
#include "bper/io.h"
#include "bper/params.h"

namespace bper {

struct SyntheticSpec {
  std::size_t num_users = 500;
  std::size_t num_items = 300;
  std::size_t num_explanations = 400;
  std::size_t d_true = 10;
  std::size_t records_per_user = 10;
  std::size_t explanations_per_record = 3;
  double noise = 0.3;  // fraction of explanations replaced uniformly
  double mu_true = 0.7;
  // Relative spread of the user-side factors against the item side.
  double user_signal = 1.5;
  double bias_scale = 1.0;
  // Gumbel temperature of item choice; 0 picks the top items exactly.
  double item_temperature = 0.5;
  std::size_t embedding_dim = 16;
  double embedding_noise = 0.1;
  std::uint64_t seed = 7;

  void Validate() const;
  bool operator==(const SyntheticSpec&) const = default;
};

struct SyntheticData {
  InteractionStore store;
  // Same pairs as `store` with the noise-free top explanations only.
  InteractionStore planted;
  FactorParams truth;   // item_bias holds the item-choice bias
  double mu = 0.0;
  EmbeddingFile embeddings;  // noisy projection of the true explanation side
};

SyntheticData GenerateSynthetic(const SyntheticSpec& spec);

}  // namespace bper
