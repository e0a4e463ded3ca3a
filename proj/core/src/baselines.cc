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

#include "bper/baselines.h"

#include <algorithm>
#include <functional>

namespace bper {

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double ToUnit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

bool Contains(std::span<const Index> set, Index x) {
  return std::binary_search(set.begin(), set.end(), x);
}

// Neighbors of every entity whose explanation sets are `sets`; `members`
// is the inverted index (explanation -> entities holding it).
std::vector<std::vector<Neighbor>> TopNeighbors(
    std::size_t n, std::size_t k,
    const std::function<std::span<const Index>(Index)>& sets,
    const std::function<std::span<const Index>(Index)>& members) {
  std::vector<std::vector<Neighbor>> out(n);
  std::vector<std::size_t> overlap(n, 0);
  std::vector<Index> touched;
  for (Index a = 0; a < n; ++a) {
    auto set_a = sets(a);
    if (set_a.empty() || k == 0) continue;
    touched.clear();
    for (Index e : set_a) {
      for (Index b : members(e)) {
        if (b == a) continue;
        if (overlap[b]++ == 0) touched.push_back(b);
      }
    }
    std::vector<Neighbor> cand;
    cand.reserve(touched.size());
    for (Index b : touched) {
      const double inter = static_cast<double>(overlap[b]);
      const double uni =
          static_cast<double>(set_a.size() + sets(b).size()) - inter;
      cand.push_back({b, inter / uni});
      overlap[b] = 0;
    }
    auto before = [](const Neighbor& x, const Neighbor& y) {
      if (x.similarity != y.similarity) return x.similarity > y.similarity;
      return x.id < y.id;
    };
    std::size_t keep = std::min(k, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + keep, cand.end(), before);
    cand.resize(keep);
    out[a] = std::move(cand);
  }
  return out;
}

}  // namespace

double Jaccard(std::span<const Index> a, std::span<const Index> b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++inter;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(inter) /
         static_cast<double>(a.size() + b.size() - inter);
}

NeighborIndex BuildNeighbors(const InteractionStore& store, std::size_t k) {
  NeighborIndex idx;
  idx.k = k;
  idx.users = TopNeighbors(
      store.num_users(), k,
      [&](Index u) { return store.explanations_of_user(u); },
      [&](Index e) { return store.users_of_explanation(e); });
  idx.items = TopNeighbors(
      store.num_items(), k,
      [&](Index i) { return store.explanations_of_item(i); },
      [&](Index e) { return store.items_of_explanation(e); });
  return idx;
}

double ScoreRandom(std::uint64_t seed, Index u, Index i, Index e) {
  std::uint64_t h = SplitMix64(seed);
  h = SplitMix64(h ^ u);
  h = SplitMix64(h ^ i);
  h = SplitMix64(h ^ e);
  return ToUnit(h);
}

double ScoreRucf(const NeighborIndex& idx, const InteractionStore& store,
                 Index u, Index i, Index e) {
  double score = 0.0;
  for (const auto& nb : idx.users.at(u)) {
    if (store.UserHasItem(nb.id, i) && store.UserHasExplanation(nb.id, e)) {
      score += nb.similarity;
    }
  }
  return score;
}

double ScoreRicf(const NeighborIndex& idx, const InteractionStore& store,
                 Index u, Index i, Index e) {
  double score = 0.0;
  for (const auto& nb : idx.items.at(i)) {
    if (store.UserHasItem(u, nb.id) && store.ItemHasExplanation(nb.id, e)) {
      score += nb.similarity;
    }
  }
  return score;
}

void RandomScorer::Score(Index u, Index i, std::span<double> out) const {
  for (std::size_t e = 0; e < n_; ++e) {
    out[e] = ScoreRandom(seed_, u, i, static_cast<Index>(e));
  }
}

RucfScorer::RucfScorer(const InteractionStore& train, std::size_t k)
    : train_(&train), index_(BuildNeighbors(train, k)) {}

std::size_t RucfScorer::num_explanations() const {
  return train_->num_explanations();
}

void RucfScorer::Score(Index u, Index i, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& nb : index_.users.at(u)) {
    if (!train_->UserHasItem(nb.id, i)) continue;
    for (Index e : train_->explanations_of_user(nb.id)) out[e] += nb.similarity;
  }
}

RicfScorer::RicfScorer(const InteractionStore& train, std::size_t k)
    : train_(&train), index_(BuildNeighbors(train, k)) {}

std::size_t RicfScorer::num_explanations() const {
  return train_->num_explanations();
}

void RicfScorer::Score(Index u, Index i, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& nb : index_.items.at(i)) {
    if (!Contains(train_->items_of_user(u), nb.id)) continue;
    for (Index e : train_->explanations_of_item(nb.id)) out[e] += nb.similarity;
  }
}

}  // namespace bper
