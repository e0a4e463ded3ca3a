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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "oracles.h"

namespace bper {
namespace {

TEST(ParseTriples, RawIdsDensifyInFirstSeenOrder) {
  auto d = ParseTriples("alice\tphone\tgreat screen\n"
                        "bob\tphone\tlong battery\n"
                        "alice\tcase\tgreat screen\n",
                        IdMode::kRawStrings);
  EXPECT_EQ(d.store.universe(), (Universe{2, 2, 2}));
  EXPECT_EQ(*d.users.Find("bob"), 1u);
  EXPECT_EQ(d.items.Lookup(1), "case");
  EXPECT_EQ(d.store.record_count(), 3u);
  EXPECT_EQ(d.store.triple_count(), 3u);
}

TEST(ParseTriples, MergesPairsAndCountsDuplicates) {
  auto d = ParseTriples("0\t0\t2\n0\t0\t1\n0\t0\t2\n", IdMode::kDense);
  ASSERT_EQ(d.store.record_count(), 1u);
  EXPECT_EQ(d.store.records()[0].explanations, (std::vector<Index>{1, 2}));
  EXPECT_EQ(d.duplicate_lines, 1u);
}

TEST(ParseTriples, SkipsCommentsBlankLinesAndCarriageReturns) {
  auto d = ParseTriples("# header\n\n0\t1\t2\r\n", IdMode::kDense);
  EXPECT_EQ(d.store.universe(), (Universe{1, 2, 3}));
}

TEST(ParseTriples, ReportsLineNumbers) {
  try {
    ParseTriples("0\t0\t0\n0\t0\n", IdMode::kDense);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  try {
    ParseTriples("0\t0\t0\n\n1\tx\t0\n", IdMode::kDense);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(ParseTriples("0\t\t1\n", IdMode::kRawStrings), DataError);
  EXPECT_THROW(ParseTriples("-1\t0\t0\n", IdMode::kDense), DataError);
}

TEST(ParseTriples, DeclaredUniverseBoundsDenseIds) {
  EXPECT_THROW(ParseTriples("0\t5\t0\n", IdMode::kDense, Universe{1, 5, 1}),
               DataError);
  auto d = ParseTriples("0\t4\t0\n", IdMode::kDense, Universe{3, 5, 7});
  EXPECT_EQ(d.store.universe(), (Universe{3, 5, 7}));
}

TEST(ParseTriples, EmptyInputIsAnError) {
  EXPECT_THROW(ParseTriples("# nothing\n", IdMode::kDense), DataError);
}

TEST(InteractionStore, RejectsOutOfRangeAndEmptySets) {
  EXPECT_THROW(InteractionStore::FromRecords({{2, 0, {0}}}, {2, 1, 1}), DataError);
  EXPECT_THROW(InteractionStore::FromRecords({{0, 0, {}}}, {1, 1, 1}), DataError);
  EXPECT_THROW(InteractionStore::FromRecords({{0, 0, {3}}}, {1, 1, 3}), DataError);
}

TEST(InteractionStore, IndexesAgreeWithRecords) {
  oracle::Gen g(1);
  auto s = oracle::RandomStore(g, 10, 12, 25, 60, 4);
  std::size_t triples = 0;
  for (const auto& r : s.records()) {
    triples += r.explanations.size();
    EXPECT_TRUE(s.UserHasItem(r.user, r.item));
    for (Index e : r.explanations) {
      EXPECT_TRUE(s.UserHasExplanation(r.user, e));
      EXPECT_TRUE(s.ItemHasExplanation(r.item, e));
    }
  }
  EXPECT_EQ(triples, s.triple_count());
  for (Index u = 0; u < 10; ++u) {
    EXPECT_EQ(oracle::UserExpls(s, u),
              std::set<Index>(s.explanations_of_user(u).begin(),
                              s.explanations_of_user(u).end()));
  }
  EXPECT_TRUE(s.explanations_of_pair(0, 0).empty() || s.FindRecord(0, 0));
}

TEST(Format, RoundTripsThroughText) {
  oracle::Gen g(2);
  auto s = oracle::RandomStore(g, 6, 7, 9, 25, 3);
  auto back = ParseTriples(FormatTriples(s), IdMode::kDense, s.universe());
  EXPECT_EQ(FormatTriples(back.store), FormatTriples(s));
  EXPECT_EQ(back.store.universe(), s.universe());
}

TEST(IdMap, SaveLoadRoundTrip) {
  IdMap m;
  m.Add("x");
  m.Add("y z");
  EXPECT_EQ(m.Add("x"), 0u);
  auto path = std::filesystem::path(::testing::TempDir()) / "ids.tsv";
  SaveIdMap(m, path.string());
  EXPECT_EQ(LoadIdMap(path.string()), m);
}

TEST(IdMap, LoadRejectsGaps) {
  auto path = std::filesystem::path(::testing::TempDir()) / "bad_ids.tsv";
  {
    std::ofstream out(path);
    out << "a\t0\nb\t2\n";
  }
  EXPECT_THROW(LoadIdMap(path.string()), DataError);
}

class SplitTest : public ::testing::Test {
 protected:
  void SetUp() override {
    oracle::Gen g(3);
    store_ = oracle::RandomStore(g, 40, 30, 60, 600, 3);
  }
  InteractionStore store_;
};

std::set<std::pair<Index, Index>> Pairs(const InteractionStore& s) {
  std::set<std::pair<Index, Index>> out;
  for (const auto& r : s.records()) out.insert({r.user, r.item});
  return out;
}

TEST_F(SplitTest, PartitionsRecords) {
  SplitSpec spec;
  for (int rep = 0; rep < spec.repetitions; ++rep) {
    Split sp = SplitStore(store_, spec, rep);
    auto tr = Pairs(sp.train), va = Pairs(sp.validation), te = Pairs(sp.test);
    EXPECT_EQ(tr.size() + va.size() + te.size(), store_.record_count());
    for (const auto& p : te) {
      EXPECT_FALSE(tr.count(p));
      EXPECT_FALSE(va.count(p));
    }
    for (const auto& p : va) EXPECT_FALSE(tr.count(p));
  }
}

TEST_F(SplitTest, TrainingCoversEveryEntity) {
  Split sp = SplitStore(store_, SplitSpec{}, 1);
  for (Index u = 0; u < store_.num_users(); ++u) {
    if (!store_.items_of_user(u).empty()) EXPECT_FALSE(sp.train.items_of_user(u).empty());
  }
  for (Index i = 0; i < store_.num_items(); ++i) {
    if (!store_.users_of_item(i).empty()) EXPECT_FALSE(sp.train.users_of_item(i).empty());
  }
  for (Index e = 0; e < store_.num_explanations(); ++e) {
    if (!store_.users_of_explanation(e).empty()) {
      EXPECT_FALSE(sp.train.users_of_explanation(e).empty());
    }
  }
}

TEST_F(SplitTest, FractionsApproximatelyHonoured) {
  SplitSpec spec;
  Split sp = SplitStore(store_, spec, 0);
  const double n = static_cast<double>(store_.record_count());
  const double full = static_cast<double>(sp.FullTrain().record_count());
  EXPECT_NEAR(full / n, 0.7, 0.1);
  EXPECT_GE(full, std::round(0.7 * n));
  EXPECT_NEAR(sp.validation.record_count() / full, 0.1, 0.02);
  EXPECT_EQ(sp.FullTrain().record_count() + sp.test.record_count(),
            store_.record_count());
}

TEST_F(SplitTest, DeterministicPerRepetition) {
  SplitSpec spec;
  Split a = SplitStore(store_, spec, 2);
  Split b = SplitStore(store_, spec, 2);
  Split c = SplitStore(store_, spec, 3);
  EXPECT_EQ(FormatTriples(a.test), FormatTriples(b.test));
  EXPECT_EQ(FormatTriples(a.validation), FormatTriples(b.validation));
  EXPECT_NE(FormatTriples(a.test), FormatTriples(c.test));
}

TEST_F(SplitTest, ValidatesSpec) {
  SplitSpec spec;
  EXPECT_THROW(SplitStore(store_, spec, 5), std::invalid_argument);
  spec.train_fraction = 1.0;
  EXPECT_THROW(SplitStore(store_, spec, 0), std::invalid_argument);
}

TEST(Subsample, HitsTargetWithinTrain) {
  oracle::Gen g(4);
  auto store = oracle::RandomStore(g, 30, 30, 50, 400, 3);
  Split sp = SplitStore(store, SplitSpec{}, 0);
  auto full = sp.FullTrain();
  auto sub = SubsampleTraining(full, 0.3, store.triple_count(), 9);
  EXPECT_EQ(sub.triple_count(),
            static_cast<std::size_t>(std::llround(0.3 * store.triple_count())));
  for (const auto& t : sub.triples()) {
    auto e = full.explanations_of_pair(t.user, t.item);
    EXPECT_TRUE(std::binary_search(e.begin(), e.end(), t.explanation));
  }
  EXPECT_EQ(FormatTriples(sub),
            FormatTriples(SubsampleTraining(full, 0.3, store.triple_count(), 9)));
  EXPECT_THROW(SubsampleTraining(full, 0.95, store.triple_count(), 9), DataError);
  EXPECT_THROW(SubsampleTraining(full, 0.0, store.triple_count(), 9),
               std::invalid_argument);
}

TEST(Merge, RequiresSameUniverse) {
  auto a = InteractionStore::FromRecords({{0, 0, {0}}}, {1, 1, 1});
  auto b = InteractionStore::FromRecords({{0, 0, {0}}}, {1, 1, 2});
  EXPECT_THROW(Merge(a, b), DataError);
}

}  // namespace
}  // namespace bper
