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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bper {

using Index = std::uint32_t;

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One observed (user, item) pair and every explanation attached to it.
// Explanations are kept sorted ascending and duplicate-free.
struct TripleRecord {
  Index user = 0;
  Index item = 0;
  std::vector<Index> explanations;

  bool operator==(const TripleRecord&) const = default;
};

struct Triple {
  Index user = 0;
  Index item = 0;
  Index explanation = 0;
};

// Sizes of the entity universes. Train/validation/test stores cut from the
// same dataset share one universe even if some entities have no records.
struct Universe {
  std::size_t users = 0;
  std::size_t items = 0;
  std::size_t explanations = 0;

  bool operator==(const Universe&) const = default;
};

// Immutable, indexed set of user-item-explanation records.
//
// All derived sets (items of a user, explanations of a user/item/pair, users
// of an item/explanation, items of an explanation) are sorted projections of
// the records and are rebuilt from scratch on construction.
class InteractionStore {
 public:
  InteractionStore() = default;

  // Records sharing a (user, item) pair are merged. Throws DataError on
  // out-of-range indices or empty explanation sets.
  static InteractionStore FromRecords(std::vector<TripleRecord> records,
                                      Universe universe);

  const Universe& universe() const { return universe_; }
  std::size_t num_users() const { return universe_.users; }
  std::size_t num_items() const { return universe_.items; }
  std::size_t num_explanations() const { return universe_.explanations; }

  std::span<const TripleRecord> records() const { return records_; }
  std::size_t record_count() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  // Flattened (u, i, e) list in record order; |T| is its size.
  std::span<const Triple> triples() const { return triples_; }
  std::size_t triple_count() const { return triples_.size(); }

  std::span<const Index> items_of_user(Index u) const {
    return items_of_user_.at(u);
  }
  std::span<const Index> explanations_of_user(Index u) const {
    return explanations_of_user_.at(u);
  }
  std::span<const Index> explanations_of_item(Index i) const {
    return explanations_of_item_.at(i);
  }
  std::span<const Index> users_of_item(Index i) const {
    return users_of_item_.at(i);
  }
  std::span<const Index> users_of_explanation(Index e) const {
    return users_of_explanation_.at(e);
  }
  std::span<const Index> items_of_explanation(Index e) const {
    return items_of_explanation_.at(e);
  }

  std::optional<std::size_t> FindRecord(Index u, Index i) const;
  // Empty span when the pair has no record.
  std::span<const Index> explanations_of_pair(Index u, Index i) const;

  bool UserHasItem(Index u, Index i) const;
  bool UserHasExplanation(Index u, Index e) const;
  bool ItemHasExplanation(Index i, Index e) const;

  // Users with at least one record, ascending.
  std::vector<Index> ActiveUsers() const;

 private:
  Universe universe_;
  std::vector<TripleRecord> records_;
  std::vector<Triple> triples_;
  std::unordered_map<std::uint64_t, std::size_t> pair_index_;
  std::vector<std::vector<Index>> items_of_user_;
  std::vector<std::vector<Index>> explanations_of_user_;
  std::vector<std::vector<Index>> explanations_of_item_;
  std::vector<std::vector<Index>> users_of_item_;
  std::vector<std::vector<Index>> users_of_explanation_;
  std::vector<std::vector<Index>> items_of_explanation_;
};

// Union of two stores over the same universe. Pairs present in both get the
// union of their explanation sets.
InteractionStore Merge(const InteractionStore& a, const InteractionStore& b);

// Raw string ID <-> dense index, assigned in first-seen order.
class IdMap {
 public:
  Index Add(std::string_view raw);
  std::optional<Index> Find(std::string_view raw) const;
  const std::string& Lookup(Index dense) const { return raw_.at(dense); }
  std::size_t size() const { return raw_.size(); }
  std::span<const std::string> raw_ids() const { return raw_; }

  bool operator==(const IdMap& other) const { return raw_ == other.raw_; }

 private:
  std::unordered_map<std::string, Index> index_;
  std::vector<std::string> raw_;
};

enum class IdMode {
  kRawStrings,  // arbitrary tokens, densified in first-seen order
  kDense,       // fields are already dense non-negative integers
};

struct LoadedDataset {
  InteractionStore store;
  IdMap users;
  IdMap items;
  IdMap explanations;
  std::size_t duplicate_lines = 0;
};

// Reads `user<TAB>item<TAB>explanation` lines. Blank lines and lines starting
// with '#' are skipped. In dense mode `universe` (if given) fixes the entity
// counts; otherwise they are max index + 1.
LoadedDataset LoadTriples(const std::string& path, IdMode mode,
                          std::optional<Universe> universe = std::nullopt);
LoadedDataset ParseTriples(std::string_view text, IdMode mode,
                           std::optional<Universe> universe = std::nullopt);

// Writes one line per triple using dense indices.
void SaveTriples(const InteractionStore& store, const std::string& path);
std::string FormatTriples(const InteractionStore& store);

void SaveIdMap(const IdMap& map, const std::string& path);
// Expects `raw<TAB>dense` lines with dense = 0, 1, 2, ... in order.
IdMap LoadIdMap(const std::string& path);

// `explanation<TAB>text` lines; the explanation field is a raw ID resolved
// through `explanations`. Missing entries come back as empty strings.
std::vector<std::string> LoadExplanationTexts(const std::string& path,
                                              const IdMap& explanations);

struct SplitSpec {
  double train_fraction = 0.7;
  double validation_fraction = 0.1;
  int repetitions = 5;
  std::uint64_t seed = 2021;

  void Validate() const;
  bool operator==(const SplitSpec&) const = default;
};

struct Split {
  InteractionStore train;       // training records minus validation
  InteractionStore validation;  // carved from post-repair training records
  InteractionStore test;
  std::size_t repaired = 0;     // test records moved to train for coverage

  InteractionStore FullTrain() const { return Merge(train, validation); }
};

// Record-level random split. Every user, item and explanation that occurs in
// `store` is guaranteed to occur in `train`. Deterministic in
// (spec.seed, repetition).
Split SplitStore(const InteractionStore& store, const SplitSpec& spec,
                 int repetition);

// Uniformly drops triples until round(ratio * whole_triple_count) remain.
// Records left without explanations disappear. Coverage is not repaired.
InteractionStore SubsampleTraining(const InteractionStore& train,
                                   double ratio_of_whole,
                                   std::size_t whole_triple_count,
                                   std::uint64_t seed);

}  // namespace bper
