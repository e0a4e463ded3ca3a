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

#include "bper/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "bper/random.h"

namespace bper {

namespace {

std::uint64_t PairKey(Index u, Index i) {
  return (static_cast<std::uint64_t>(u) << 32) | i;
}

bool SortedContains(std::span<const Index> set, Index x) {
  return std::binary_search(set.begin(), set.end(), x);
}

void SortUnique(std::vector<Index>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Splits on '\t', dropping a trailing '\r'.
std::vector<std::string_view> SplitTabs(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

template <typename Fn>
void ForEachLine(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    fn(line_no, text.substr(start, end - start));
    start = end + 1;
  }
}

bool IsSkippable(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line.empty() || line.front() == '#';
}

std::optional<Index> ParseIndex(std::string_view field) {
  Index value = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    return std::nullopt;
  }
  return value;
}

IdMap IdentityMap(std::size_t n) {
  IdMap map;
  for (std::size_t k = 0; k < n; ++k) map.Add(std::to_string(k));
  return map;
}

}  // namespace

InteractionStore InteractionStore::FromRecords(std::vector<TripleRecord> records,
                                               Universe universe) {
  InteractionStore store;
  store.universe_ = universe;

  for (auto& rec : records) {
    if (rec.user >= universe.users || rec.item >= universe.items) {
      throw DataError("record references entity outside the universe");
    }
    if (rec.explanations.empty()) {
      throw DataError("record has an empty explanation set");
    }
    for (Index e : rec.explanations) {
      if (e >= universe.explanations) {
        throw DataError("explanation index outside the universe");
      }
    }
    auto key = PairKey(rec.user, rec.item);
    auto it = store.pair_index_.find(key);
    if (it == store.pair_index_.end()) {
      store.pair_index_.emplace(key, store.records_.size());
      store.records_.push_back(std::move(rec));
    } else {
      auto& target = store.records_[it->second].explanations;
      target.insert(target.end(), rec.explanations.begin(),
                    rec.explanations.end());
    }
  }

  store.items_of_user_.resize(universe.users);
  store.explanations_of_user_.resize(universe.users);
  store.explanations_of_item_.resize(universe.items);
  store.users_of_item_.resize(universe.items);
  store.users_of_explanation_.resize(universe.explanations);
  store.items_of_explanation_.resize(universe.explanations);

  for (auto& rec : store.records_) {
    SortUnique(rec.explanations);
    store.items_of_user_[rec.user].push_back(rec.item);
    store.users_of_item_[rec.item].push_back(rec.user);
    for (Index e : rec.explanations) {
      store.triples_.push_back({rec.user, rec.item, e});
      store.explanations_of_user_[rec.user].push_back(e);
      store.explanations_of_item_[rec.item].push_back(e);
      store.users_of_explanation_[e].push_back(rec.user);
      store.items_of_explanation_[e].push_back(rec.item);
    }
  }
  for (auto* sets :
       {&store.items_of_user_, &store.explanations_of_user_,
        &store.explanations_of_item_, &store.users_of_item_,
        &store.users_of_explanation_, &store.items_of_explanation_}) {
    for (auto& s : *sets) SortUnique(s);
  }
  return store;
}

std::optional<std::size_t> InteractionStore::FindRecord(Index u,
                                                        Index i) const {
  auto it = pair_index_.find(PairKey(u, i));
  if (it == pair_index_.end()) return std::nullopt;
  return it->second;
}

std::span<const Index> InteractionStore::explanations_of_pair(Index u,
                                                              Index i) const {
  auto rec = FindRecord(u, i);
  if (!rec) return {};
  return records_[*rec].explanations;
}

bool InteractionStore::UserHasItem(Index u, Index i) const {
  return SortedContains(items_of_user_[u], i);
}

bool InteractionStore::UserHasExplanation(Index u, Index e) const {
  return SortedContains(explanations_of_user_[u], e);
}

bool InteractionStore::ItemHasExplanation(Index i, Index e) const {
  return SortedContains(explanations_of_item_[i], e);
}

std::vector<Index> InteractionStore::ActiveUsers() const {
  std::vector<Index> users;
  for (Index u = 0; u < universe_.users; ++u) {
    if (!items_of_user_[u].empty()) users.push_back(u);
  }
  return users;
}

InteractionStore Merge(const InteractionStore& a, const InteractionStore& b) {
  if (a.universe() != b.universe()) {
    throw DataError("cannot merge stores over different universes");
  }
  std::vector<TripleRecord> records(a.records().begin(), a.records().end());
  records.insert(records.end(), b.records().begin(), b.records().end());
  return InteractionStore::FromRecords(std::move(records), a.universe());
}

Index IdMap::Add(std::string_view raw) {
  auto it = index_.find(std::string(raw));
  if (it != index_.end()) return it->second;
  auto dense = static_cast<Index>(raw_.size());
  raw_.emplace_back(raw);
  index_.emplace(raw_.back(), dense);
  return dense;
}

std::optional<Index> IdMap::Find(std::string_view raw) const {
  auto it = index_.find(std::string(raw));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LoadedDataset ParseTriples(std::string_view text, IdMode mode,
                           std::optional<Universe> universe) {
  LoadedDataset out;
  std::vector<TripleRecord> records;
  std::unordered_map<std::uint64_t, std::size_t> pairs;
  Universe seen;

  ForEachLine(text, [&](std::size_t line_no, std::string_view line) {
    if (IsSkippable(line)) return;
    auto fields = SplitTabs(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() ||
        fields[2].empty()) {
      throw DataError("line " + std::to_string(line_no) +
                      ": expected user<TAB>item<TAB>explanation");
    }
    Index u, i, e;
    if (mode == IdMode::kRawStrings) {
      u = out.users.Add(fields[0]);
      i = out.items.Add(fields[1]);
      e = out.explanations.Add(fields[2]);
    } else {
      auto pu = ParseIndex(fields[0]);
      auto pi = ParseIndex(fields[1]);
      auto pe = ParseIndex(fields[2]);
      if (!pu || !pi || !pe) {
        throw DataError("line " + std::to_string(line_no) +
                        ": dense mode expects non-negative integers");
      }
      u = *pu;
      i = *pi;
      e = *pe;
      if (universe && (u >= universe->users || i >= universe->items ||
                       e >= universe->explanations)) {
        throw DataError("line " + std::to_string(line_no) +
                        ": index outside the declared universe");
      }
    }
    seen.users = std::max<std::size_t>(seen.users, u + 1);
    seen.items = std::max<std::size_t>(seen.items, i + 1);
    seen.explanations = std::max<std::size_t>(seen.explanations, e + 1);

    auto key = PairKey(u, i);
    auto it = pairs.find(key);
    if (it == pairs.end()) {
      pairs.emplace(key, records.size());
      records.push_back({u, i, {e}});
      return;
    }
    auto& expl = records[it->second].explanations;
    if (std::find(expl.begin(), expl.end(), e) != expl.end()) {
      ++out.duplicate_lines;
    } else {
      expl.push_back(e);
    }
  });

  if (records.empty()) throw DataError("empty dataset");

  Universe uni = seen;
  if (mode == IdMode::kRawStrings) {
    uni = {out.users.size(), out.items.size(), out.explanations.size()};
  } else {
    if (universe) uni = *universe;
    out.users = IdentityMap(uni.users);
    out.items = IdentityMap(uni.items);
    out.explanations = IdentityMap(uni.explanations);
  }
  out.store = InteractionStore::FromRecords(std::move(records), uni);
  return out;
}

LoadedDataset LoadTriples(const std::string& path, IdMode mode,
                          std::optional<Universe> universe) {
  return ParseTriples(ReadFile(path), mode, universe);
}

std::string FormatTriples(const InteractionStore& store) {
  std::string out;
  for (const auto& t : store.triples()) {
    out += std::to_string(t.user);
    out += '\t';
    out += std::to_string(t.item);
    out += '\t';
    out += std::to_string(t.explanation);
    out += '\n';
  }
  return out;
}

void SaveTriples(const InteractionStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << FormatTriples(store);
}

void SaveIdMap(const IdMap& map, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  for (std::size_t k = 0; k < map.size(); ++k) {
    out << map.Lookup(static_cast<Index>(k)) << '\t' << k << '\n';
  }
}

IdMap LoadIdMap(const std::string& path) {
  IdMap map;
  std::string text = ReadFile(path);
  ForEachLine(text, [&](std::size_t line_no, std::string_view line) {
    if (IsSkippable(line)) return;
    auto fields = SplitTabs(line);
    auto dense = fields.size() == 2 ? ParseIndex(fields[1]) : std::nullopt;
    if (!dense || *dense != map.size() || map.Find(fields[0])) {
      throw DataError(path + ": line " + std::to_string(line_no) +
                      ": expected raw<TAB>" + std::to_string(map.size()));
    }
    map.Add(fields[0]);
  });
  return map;
}

std::vector<std::string> LoadExplanationTexts(const std::string& path,
                                              const IdMap& explanations) {
  std::vector<std::string> texts(explanations.size());
  std::string text = ReadFile(path);
  ForEachLine(text, [&](std::size_t line_no, std::string_view line) {
    if (IsSkippable(line)) return;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError(path + ": line " + std::to_string(line_no) +
                      ": expected explanation<TAB>text");
    }
    auto dense = explanations.Find(line.substr(0, tab));
    if (dense) texts[*dense] = std::string(line.substr(tab + 1));
  });
  return texts;
}

void SplitSpec::Validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must lie in (0, 1)");
  }
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw std::invalid_argument("validation_fraction must lie in [0, 1)");
  }
  if (repetitions < 1) {
    throw std::invalid_argument("repetitions must be at least 1");
  }
}

namespace {

// Per-entity record counts for a subset of records.
struct Coverage {
  std::vector<std::size_t> users, items, explanations;

  explicit Coverage(const Universe& u)
      : users(u.users), items(u.items), explanations(u.explanations) {}

  void Add(const TripleRecord& r, int delta) {
    users[r.user] += delta;
    items[r.item] += delta;
    for (Index e : r.explanations) explanations[e] += delta;
  }

  bool CoversNew(const TripleRecord& r) const {
    if (users[r.user] == 0 || items[r.item] == 0) return true;
    for (Index e : r.explanations) {
      if (explanations[e] == 0) return true;
    }
    return false;
  }

  bool SafeToRemove(const TripleRecord& r) const {
    if (users[r.user] < 2 || items[r.item] < 2) return false;
    for (Index e : r.explanations) {
      if (explanations[e] < 2) return false;
    }
    return true;
  }
};

InteractionStore Subset(const InteractionStore& store,
                        std::vector<std::size_t> idx) {
  std::sort(idx.begin(), idx.end());
  std::vector<TripleRecord> records;
  records.reserve(idx.size());
  for (auto k : idx) records.push_back(store.records()[k]);
  return InteractionStore::FromRecords(std::move(records), store.universe());
}

}  // namespace

Split SplitStore(const InteractionStore& store, const SplitSpec& spec,
                 int repetition) {
  spec.Validate();
  if (repetition < 0 || repetition >= spec.repetitions) {
    throw std::invalid_argument("repetition out of range");
  }
  if (store.empty()) throw DataError("cannot split an empty store");

  const std::size_t n = store.record_count();
  Rng rng = MakeRng(spec.seed, static_cast<std::uint64_t>(repetition));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  auto n_train = static_cast<std::size_t>(
      std::llround(spec.train_fraction * static_cast<double>(n)));
  n_train = std::min(n_train, n);

  Coverage cov(store.universe());
  std::vector<std::size_t> train(order.begin(), order.begin() + n_train);
  for (auto k : train) cov.Add(store.records()[k], 1);

  // Test records are visited in the shuffled order; the first record that
  // brings in a missing entity moves to train.
  Split out;
  std::vector<std::size_t> test;
  for (std::size_t pos = n_train; pos < n; ++pos) {
    const auto& rec = store.records()[order[pos]];
    if (cov.CoversNew(rec)) {
      cov.Add(rec, 1);
      train.push_back(order[pos]);
      ++out.repaired;
    } else {
      test.push_back(order[pos]);
    }
  }

  // Validation records are drawn so that the remaining training records
  // still cover every entity.
  auto n_valid = static_cast<std::size_t>(std::llround(
      spec.validation_fraction * static_cast<double>(train.size())));
  std::vector<std::size_t> candidates = train;
  std::shuffle(candidates.begin(), candidates.end(), rng);
  std::vector<std::size_t> valid;
  std::vector<char> in_valid(n, 0);
  for (auto k : candidates) {
    if (valid.size() >= n_valid) break;
    const auto& rec = store.records()[k];
    if (!cov.SafeToRemove(rec)) continue;
    cov.Add(rec, -1);
    valid.push_back(k);
    in_valid[k] = 1;
  }
  std::vector<std::size_t> train_only;
  for (auto k : train) {
    if (!in_valid[k]) train_only.push_back(k);
  }

  out.train = Subset(store, std::move(train_only));
  out.validation = Subset(store, std::move(valid));
  out.test = Subset(store, std::move(test));
  return out;
}

InteractionStore SubsampleTraining(const InteractionStore& train,
                                   double ratio_of_whole,
                                   std::size_t whole_triple_count,
                                   std::uint64_t seed) {
  if (!(ratio_of_whole > 0.0 && ratio_of_whole <= 1.0)) {
    throw std::invalid_argument("ratio must lie in (0, 1]");
  }
  auto target = static_cast<std::size_t>(std::llround(
      ratio_of_whole * static_cast<double>(whole_triple_count)));
  const auto triples = train.triples();
  if (target > triples.size()) {
    throw DataError("target of " + std::to_string(target) +
                    " triples exceeds the " + std::to_string(triples.size()) +
                    " available training triples");
  }

  Rng rng = MakeRng(seed, 0x5ab5u);
  std::vector<std::size_t> keep(triples.size());
  std::iota(keep.begin(), keep.end(), 0);
  std::shuffle(keep.begin(), keep.end(), rng);
  keep.resize(target);
  std::sort(keep.begin(), keep.end());

  std::vector<TripleRecord> records;
  for (auto k : keep) {
    const auto& t = triples[k];
    if (records.empty() || records.back().user != t.user ||
        records.back().item != t.item) {
      records.push_back({t.user, t.item, {}});
    }
    records.back().explanations.push_back(t.explanation);
  }
  return InteractionStore::FromRecords(std::move(records), train.universe());
}

}  // namespace bper
