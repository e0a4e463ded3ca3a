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


#include "bper/eval.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "checks.h"
#include "oracles.h"

namespace bper {
namespace {

std::vector<double> Descending(std::size_t n) {
  std::vector<double> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = static_cast<double>(n - k);
  return s;
}

TEST(MetricsForPair, WorkedExample) {
  // Hits at ranks 2 and 7, four relevant explanations.
  auto scores = Descending(20);
  std::vector<Index> truth = {1, 6, 15, 18};
  PairMetrics m = MetricsForPair(TopN(scores, 10), truth, 10);
  double z = 0.0;
  for (int p = 1; p <= 10; ++p) z += 1.0 / std::log(p + 1.0);
  EXPECT_DOUBLE_EQ(m.precision, 0.2);
  EXPECT_DOUBLE_EQ(m.recall, 0.5);
  EXPECT_NEAR(m.f1, 2.0 * 0.1 / 0.7, 1e-15);
  EXPECT_NEAR(m.ndcg, (1.0 / std::log(3.0) + 1.0 / std::log(8.0)) / z, 1e-15);
}

TEST(MetricsForPair, AllRelevantIsExactlyOne) {
  auto scores = Descending(30);
  std::vector<Index> truth = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  PairMetrics m = MetricsForPair(TopN(scores, 10), truth, 10);
  EXPECT_EQ(m.ndcg, 1.0);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.f1, 1.0);
}

TEST(MetricsForPair, ZeroHitIsExactlyZero) {
  auto scores = Descending(30);
  std::vector<Index> truth = {20, 25};
  PairMetrics m = MetricsForPair(TopN(scores, 10), truth, 10);
  EXPECT_EQ(m.ndcg, 0.0);
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.f1, 0.0);
}

TEST(MetricsForPair, MatchesBruteForce) {
  EXPECT_LE(checks::MetricMaxError(1000, 17), 1e-12);
}

TEST(MetricsForPair, ShortListKeepsCutoffDenominator) {
  // Only three candidates exist; precision still divides by N.
  std::vector<double> scores = {0.3, 0.2, 0.1};
  std::vector<Index> truth = {0, 1, 2};
  PairMetrics m = MetricsForPair(TopN(scores, 10), truth, 10);
  EXPECT_DOUBLE_EQ(m.precision, 0.3);
  EXPECT_DOUBLE_EQ(m.recall, 1.0);
  EXPECT_LT(m.ndcg, 1.0);
}

TEST(MetricsForPair, RejectsEmptyTruthAndZeroCutoff) {
  auto scores = Descending(5);
  EXPECT_THROW(MetricsForPair(TopN(scores, 3), {}, 3), std::invalid_argument);
  EXPECT_THROW(TopN(scores, 0), std::invalid_argument);
}

TEST(MetricsForPair, BoundedInUnitInterval) {
  oracle::Gen g(3);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> s(25);
    for (double& x : s) x = oracle::Normal(g, 1.0);
    std::set<Index> truth;
    std::size_t k = 1 + oracle::Uniform(g, 8);
    while (truth.size() < k) truth.insert(static_cast<Index>(oracle::Uniform(g, 25)));
    std::vector<Index> tv(truth.begin(), truth.end());
    PairMetrics m = MetricsForPair(TopN(s, 10), tv, 10);
    for (double v : {m.ndcg, m.precision, m.recall, m.f1}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(TopN, TiesBreakByLowerId) {
  std::vector<double> s = {1.0, 2.0, 2.0, 1.0, 2.0};
  EXPECT_EQ(TopN(s, 4).ids(), (std::vector<Index>{1, 2, 4, 0}));
}

TEST(TopN, ExcludesListedIds) {
  auto s = Descending(6);
  std::vector<Index> ex = {0, 2};
  EXPECT_EQ(TopN(s, 3, ex).ids(), (std::vector<Index>{1, 3, 4}));
}

TEST(Average, EmptyReportFlagged) {
  MetricsReport r = Average({}, 10);
  EXPECT_TRUE(r.empty());
  EXPECT_EQ(r.f1, 0.0);
}

TEST(EvaluateExplanationRanking, ThreadCountDoesNotChangeResult) {
  oracle::Gen g(5);
  auto store = oracle::RandomStore(g, 20, 20, 40, 120, 4);
  FunctionExplanationScorer scorer(40, [](Index u, Index i, Index e) {
    return std::sin(1.0 + u * 0.3 + i * 0.7 + e * 1.1);
  });
  MetricsReport a = EvaluateExplanationRanking(scorer, store, 10, {1});
  MetricsReport b = EvaluateExplanationRanking(scorer, store, 10, {4});
  EXPECT_EQ(a.ndcg, b.ndcg);
  EXPECT_EQ(a.f1, b.f1);
  EXPECT_EQ(a.unit_count, store.record_count());
}

TEST(HitRate, PerfectScorerHitsEveryPair) {
  oracle::Gen g(6);
  auto store = oracle::RandomStore(g, 10, 10, 30, 50, 3);
  FunctionExplanationScorer scorer(30, [&](Index u, Index i, Index e) {
    auto truth = store.explanations_of_pair(u, i);
    return std::binary_search(truth.begin(), truth.end(), e) ? 1.0 : 0.0;
  });
  EXPECT_EQ(HitRate(scorer, store, 10), 1.0);
  MetricsReport r = EvaluateExplanationRanking(scorer, store, 10);
  EXPECT_EQ(r.recall, 1.0);
}

class JointTest : public ::testing::Test {
 protected:
  void SetUp() override {
    train_ = InteractionStore::FromRecords(
        {{0, 0, {0}}, {1, 1, {1}}}, {2, 5, 6});
    test_ = InteractionStore::FromRecords(
        {{0, 2, {2, 3}}, {1, 3, {4}}, {1, 4, {5}}}, {2, 5, 6});
  }
  InteractionStore train_;
  InteractionStore test_;
};

TEST_F(JointTest, OracleItemsCountEveryTestPair) {
  FunctionItemScorer items(5, [&](Index u, Index i) {
    return test_.UserHasItem(u, i) ? 1.0 : 0.0;
  });
  FunctionExplanationScorer expl(6, [](Index, Index, Index e) {
    return -static_cast<double>(e);
  });
  JointReport r = EvaluateJoint(items, expl, train_, test_, 2, 3);
  EXPECT_EQ(r.recommendation.unit_count, 2u);
  EXPECT_EQ(r.recommendation.recall, 1.0);
  EXPECT_EQ(r.explanation.unit_count, 3u);
}

TEST_F(JointTest, WrongItemsGiveEmptyExplanationReport) {
  FunctionItemScorer items(5, [&](Index u, Index i) {
    return test_.UserHasItem(u, i) ? -1.0 : 1.0;
  });
  FunctionExplanationScorer expl(6, [](Index, Index, Index) { return 0.0; });
  JointReport r = EvaluateJoint(items, expl, train_, test_, 1, 3);
  EXPECT_EQ(r.recommendation.f1, 0.0);
  EXPECT_TRUE(r.explanation.empty());
}

TEST_F(JointTest, TrainingItemsAreNeverRecommended) {
  FunctionItemScorer items(5, [](Index u, Index i) {
    return (u == 0 && i == 0) || (u == 1 && i == 1) ? 100.0 : 0.0;
  });
  FunctionExplanationScorer expl(6, [](Index, Index, Index) { return 0.0; });
  RankedList top0 = TopItems(items, 0, 5, train_.items_of_user(0));
  for (Index id : top0.ids()) EXPECT_NE(id, 0u);
  EXPECT_EQ(top0.entries.size(), 4u);
}

}  // namespace
}  // namespace bper
