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

#include "bper/sampler.h"

#include <algorithm>

namespace bper {

namespace {

template <typename Contains>
std::optional<Index> Reject(std::size_t universe, std::size_t excluded,
                            Contains&& contains, auto&& draw) {
  if (excluded >= universe) return std::nullopt;
  while (true) {
    Index x = draw(universe);
    if (!contains(x)) return x;
  }
}

}  // namespace

Sampler::Sampler(const InteractionStore& store, std::uint64_t seed,
                 std::uint64_t stream)
    : store_(&store), rng_(MakeRng(seed, stream)) {
  if (store.empty()) throw DataError("cannot sample from an empty store");
}

Index Sampler::DrawBelow(std::size_t n) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return static_cast<Index>(dist(rng_));
}

const Triple& Sampler::DrawTriple() {
  return store_->triples()[DrawBelow(store_->triple_count())];
}

std::optional<Index> Sampler::DrawExplanationNotOfUser(Index u) {
  auto set = store_->explanations_of_user(u);
  return Reject(
      store_->num_explanations(), set.size(),
      [&](Index e) { return std::binary_search(set.begin(), set.end(), e); },
      [&](std::size_t n) { return DrawBelow(n); });
}

std::optional<Index> Sampler::DrawExplanationNotOfItem(Index i) {
  auto set = store_->explanations_of_item(i);
  return Reject(
      store_->num_explanations(), set.size(),
      [&](Index e) { return std::binary_search(set.begin(), set.end(), e); },
      [&](std::size_t n) { return DrawBelow(n); });
}

std::optional<Index> Sampler::DrawExplanationNotOfPair(Index u, Index i) {
  auto set = store_->explanations_of_pair(u, i);
  return Reject(
      store_->num_explanations(), set.size(),
      [&](Index e) { return std::binary_search(set.begin(), set.end(), e); },
      [&](std::size_t n) { return DrawBelow(n); });
}

std::optional<Index> Sampler::DrawItemNotOfUser(Index u) {
  auto set = store_->items_of_user(u);
  return Reject(
      store_->num_items(), set.size(),
      [&](Index i) { return std::binary_search(set.begin(), set.end(), i); },
      [&](std::size_t n) { return DrawBelow(n); });
}

}  // namespace bper
