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

// Non-factorization explanation rankers: random scores and the revised
// user-/item-based collaborative filters over Jaccard similarity of
// explanation sets.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bper/dataset.h"
#include "bper/eval.h"

namespace bper {

struct Neighbor {
  Index id = 0;
  double similarity = 0.0;

  bool operator==(const Neighbor&) const = default;
};

// Top-K neighbors per user (over E_u) and per item (over E_i), sorted by
// similarity descending then id ascending. Only pairs with a non-empty
// overlap are listed, and an entity is never its own neighbor.
struct NeighborIndex {
  std::size_t k = 0;
  std::vector<std::vector<Neighbor>> users;
  std::vector<std::vector<Neighbor>> items;
};

// |a ∩ b| / |a ∪ b| of two sorted sets; 0 when both are empty.
double Jaccard(std::span<const Index> a, std::span<const Index> b);

NeighborIndex BuildNeighbors(const InteractionStore& store, std::size_t k);

// i.i.d. uniform [0, 1) score. The stream is a pure function of
// (seed, u, i, e), so rankings are reproducible in any evaluation order.
double ScoreRandom(std::uint64_t seed, Index u, Index i, Index e);

// Sum of s(u, u') over u' in N_u ∩ U_i ∩ U_e.
double ScoreRucf(const NeighborIndex& idx, const InteractionStore& store,
                 Index u, Index i, Index e);
// Sum of s(i, i') over i' in N_i ∩ I_u ∩ I_e.
double ScoreRicf(const NeighborIndex& idx, const InteractionStore& store,
                 Index u, Index i, Index e);

class RandomScorer : public ExplanationScorer {
 public:
  RandomScorer(std::size_t num_explanations, std::uint64_t seed)
      : n_(num_explanations), seed_(seed) {}
  std::size_t num_explanations() const override { return n_; }
  void Score(Index u, Index i, std::span<double> out) const override;

 private:
  std::size_t n_;
  std::uint64_t seed_;
};

// Batched RUCF: one pass over the neighbors of u instead of one per e.
class RucfScorer : public ExplanationScorer {
 public:
  RucfScorer(const InteractionStore& train, std::size_t k);
  std::size_t num_explanations() const override;
  void Score(Index u, Index i, std::span<double> out) const override;
  const NeighborIndex& index() const { return index_; }

 private:
  const InteractionStore* train_;
  NeighborIndex index_;
};

class RicfScorer : public ExplanationScorer {
 public:
  RicfScorer(const InteractionStore& train, std::size_t k);
  std::size_t num_explanations() const override;
  void Score(Index u, Index i, std::span<double> out) const override;
  const NeighborIndex& index() const { return index_; }

 private:
  const InteractionStore* train_;
  NeighborIndex index_;
};

}  // namespace bper
