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
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "bper/dataset.h"

namespace bper {

// Scores every explanation in the universe for one (user, item) pair.
// Implementations must be safe to call concurrently.
class ExplanationScorer {
 public:
  virtual ~ExplanationScorer() = default;
  virtual std::size_t num_explanations() const = 0;
  virtual void Score(Index u, Index i, std::span<double> out) const = 0;
};

// Scores every item for one user.
class ItemScorer {
 public:
  virtual ~ItemScorer() = default;
  virtual std::size_t num_items() const = 0;
  virtual void Score(Index u, std::span<double> out) const = 0;
};

// Adapts a per-triple function.
class FunctionExplanationScorer : public ExplanationScorer {
 public:
  using Fn = std::function<double(Index, Index, Index)>;
  FunctionExplanationScorer(std::size_t num_explanations, Fn fn)
      : n_(num_explanations), fn_(std::move(fn)) {}
  std::size_t num_explanations() const override { return n_; }
  void Score(Index u, Index i, std::span<double> out) const override {
    for (std::size_t e = 0; e < n_; ++e) out[e] = fn_(u, i, static_cast<Index>(e));
  }

 private:
  std::size_t n_;
  Fn fn_;
};

class FunctionItemScorer : public ItemScorer {
 public:
  using Fn = std::function<double(Index, Index)>;
  FunctionItemScorer(std::size_t num_items, Fn fn)
      : n_(num_items), fn_(std::move(fn)) {}
  std::size_t num_items() const override { return n_; }
  void Score(Index u, std::span<double> out) const override {
    for (std::size_t i = 0; i < n_; ++i) out[i] = fn_(u, static_cast<Index>(i));
  }

 private:
  std::size_t n_;
  Fn fn_;
};

struct RankedEntry {
  Index id = 0;
  double score = 0.0;

  bool operator==(const RankedEntry&) const = default;
};

// Sorted by score descending, ties by ascending id; at most `cutoff` long.
struct RankedList {
  std::vector<RankedEntry> entries;
  std::size_t cutoff = 0;

  std::vector<Index> ids() const;
  bool operator==(const RankedList&) const = default;
};

// Top `n` candidates of `scores` (indexed by id). `exclude` (sorted) ids are
// skipped.
RankedList TopN(std::span<const double> scores, std::size_t n,
                std::span<const Index> exclude = {});

// Ranks the whole explanation universe for (u, i).
RankedList TopExplanations(const ExplanationScorer& scorer, Index u, Index i,
                           std::size_t n);
// Ranks I \ I_u (training items excluded).
RankedList TopItems(const ItemScorer& scorer, Index u, std::size_t m,
                    std::span<const Index> exclude_train);

struct PairMetrics {
  double ndcg = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// rel_p = [p-th ranked id in ground truth] for p = 1..n (missing positions
// count as misses); NDCG = sum_p (2^rel_p - 1) / ln(p + 1) divided by
// Z = sum_{p=1..n} 1 / ln(p + 1); precision divides hits by n, recall by
// |ground truth|. `ground_truth` must be sorted and non-empty.
PairMetrics MetricsForPair(const RankedList& ranked,
                           std::span<const Index> ground_truth, std::size_t n);

struct MetricsReport {
  double ndcg = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t unit_count = 0;  // 0 flags an empty report
  std::size_t cutoff = 0;

  bool empty() const { return unit_count == 0; }
};

// Sums in unit order, then divides by the unit count.
MetricsReport Average(std::span<const PairMetrics> units, std::size_t cutoff);

struct EvalOptions {
  std::size_t threads = 1;
};

// Mean of MetricsForPair over every test record, ground truth E_ui^test.
MetricsReport EvaluateExplanationRanking(const ExplanationScorer& scorer,
                                         const InteractionStore& test,
                                         std::size_t n,
                                         const EvalOptions& opts = {});

// Fraction of test pairs with at least one ground-truth explanation in the
// top n.
double HitRate(const ExplanationScorer& scorer, const InteractionStore& test,
               std::size_t n);

struct JointReport {
  MetricsReport recommendation;  // per test user, top-m items
  MetricsReport explanation;     // per correctly recommended (u, i) pair
};

// Two-stage protocol: rank I \ I_u^train for every user with test records,
// score the list against the user's test items, then rank explanations for
// every recommended item that is in the user's test set.
JointReport EvaluateJoint(const ItemScorer& items,
                          const ExplanationScorer& explanations,
                          const InteractionStore& train,
                          const InteractionStore& test, std::size_t m,
                          std::size_t n, const EvalOptions& opts = {});

}  // namespace bper
