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

#include <cstdint>
#include <optional>

#include "bper/dataset.h"
#include "bper/random.h"

namespace bper {

// Uniform draws over the training triples and over complement sets.
// Negatives are found by rejection from the full entity range, which is
// exactly uniform over the complement. A draw returns nullopt when the
// complement is empty.
class Sampler {
 public:
  Sampler(const InteractionStore& store, std::uint64_t seed,
          std::uint64_t stream = 0);

  const Triple& DrawTriple();
  std::optional<Index> DrawExplanationNotOfUser(Index u);  // E \ E_u
  std::optional<Index> DrawExplanationNotOfItem(Index i);  // E \ E_i
  std::optional<Index> DrawExplanationNotOfPair(Index u, Index i);  // E \ E_ui
  std::optional<Index> DrawItemNotOfUser(Index u);         // I \ I_u

  Rng& rng() { return rng_; }

 private:
  Index DrawBelow(std::size_t n);

  const InteractionStore* store_;
  Rng rng_;
};

}  // namespace bper
