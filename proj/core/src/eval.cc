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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace bper {

namespace {

bool Before(const RankedEntry& a, const RankedEntry& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

// Runs fn(k) for k in [0, n) on up to `threads` workers. Results must be
// written to per-k slots; merging is left to the caller.
template <typename Fn>
void ParallelFor(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::vector<std::thread> workers;
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      for (std::size_t k = t; k < n; k += threads) fn(k);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace

std::vector<Index> RankedList::ids() const {
  std::vector<Index> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.id);
  return out;
}

RankedList TopN(std::span<const double> scores, std::size_t n,
                std::span<const Index> exclude) {
  if (n < 1) throw std::invalid_argument("cutoff must be at least 1");
  std::vector<RankedEntry> cand;
  cand.reserve(scores.size());
  for (std::size_t id = 0; id < scores.size(); ++id) {
    auto x = static_cast<Index>(id);
    if (!exclude.empty() &&
        std::binary_search(exclude.begin(), exclude.end(), x)) {
      continue;
    }
    cand.push_back({x, scores[id]});
  }
  std::size_t keep = std::min(n, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + keep, cand.end(), Before);
  cand.resize(keep);
  return {std::move(cand), n};
}

RankedList TopExplanations(const ExplanationScorer& scorer, Index u, Index i,
                           std::size_t n) {
  std::vector<double> scores(scorer.num_explanations());
  scorer.Score(u, i, scores);
  return TopN(scores, n);
}

RankedList TopItems(const ItemScorer& scorer, Index u, std::size_t m,
                    std::span<const Index> exclude_train) {
  std::vector<double> scores(scorer.num_items());
  scorer.Score(u, scores);
  return TopN(scores, m, exclude_train);
}

PairMetrics MetricsForPair(const RankedList& ranked,
                           std::span<const Index> ground_truth,
                           std::size_t n) {
  if (ground_truth.empty()) {
    throw std::invalid_argument("ground truth must not be empty");
  }
  if (n < 1) throw std::invalid_argument("cutoff must be at least 1");
  double dcg = 0.0;
  double z = 0.0;
  std::size_t hits = 0;
  for (std::size_t p = 1; p <= n; ++p) {
    const double discount = 1.0 / std::log(static_cast<double>(p) + 1.0);
    z += discount;
    if (p <= ranked.entries.size() &&
        std::binary_search(ground_truth.begin(), ground_truth.end(),
                           ranked.entries[p - 1].id)) {
      dcg += discount;  // 2^1 - 1
      ++hits;
    }
  }
  PairMetrics m;
  m.ndcg = dcg / z;
  m.precision = static_cast<double>(hits) / static_cast<double>(n);
  m.recall =
      static_cast<double>(hits) / static_cast<double>(ground_truth.size());
  const double denom = m.precision + m.recall;
  m.f1 = denom > 0.0 ? 2.0 * m.precision * m.recall / denom : 0.0;
  return m;
}

MetricsReport Average(std::span<const PairMetrics> units, std::size_t cutoff) {
  MetricsReport r;
  r.cutoff = cutoff;
  r.unit_count = units.size();
  if (units.empty()) return r;
  for (const auto& m : units) {
    r.ndcg += m.ndcg;
    r.precision += m.precision;
    r.recall += m.recall;
    r.f1 += m.f1;
  }
  const double count = static_cast<double>(units.size());
  r.ndcg /= count;
  r.precision /= count;
  r.recall /= count;
  r.f1 /= count;
  return r;
}

MetricsReport EvaluateExplanationRanking(const ExplanationScorer& scorer,
                                         const InteractionStore& test,
                                         std::size_t n,
                                         const EvalOptions& opts) {
  const auto records = test.records();
  std::vector<PairMetrics> units(records.size());
  ParallelFor(records.size(), opts.threads, [&](std::size_t k) {
    const auto& rec = records[k];
    units[k] = MetricsForPair(TopExplanations(scorer, rec.user, rec.item, n),
                              rec.explanations, n);
  });
  return Average(units, n);
}

double HitRate(const ExplanationScorer& scorer, const InteractionStore& test,
               std::size_t n) {
  if (test.empty()) return 0.0;
  std::size_t hit_pairs = 0;
  for (const auto& rec : test.records()) {
    auto ranked = TopExplanations(scorer, rec.user, rec.item, n);
    for (const auto& entry : ranked.entries) {
      if (std::binary_search(rec.explanations.begin(), rec.explanations.end(),
                             entry.id)) {
        ++hit_pairs;
        break;
      }
    }
  }
  return static_cast<double>(hit_pairs) /
         static_cast<double>(test.record_count());
}

JointReport EvaluateJoint(const ItemScorer& items,
                          const ExplanationScorer& explanations,
                          const InteractionStore& train,
                          const InteractionStore& test, std::size_t m,
                          std::size_t n, const EvalOptions& opts) {
  const std::vector<Index> users = test.ActiveUsers();
  std::vector<PairMetrics> rec_units(users.size());
  std::vector<std::vector<PairMetrics>> expl_units(users.size());

  ParallelFor(users.size(), opts.threads, [&](std::size_t k) {
    const Index u = users[k];
    const auto truth = test.items_of_user(u);
    RankedList ranked = TopItems(items, u, m, train.items_of_user(u));
    rec_units[k] = MetricsForPair(ranked, truth, m);
    for (const auto& entry : ranked.entries) {
      auto pair_truth = test.explanations_of_pair(u, entry.id);
      if (pair_truth.empty()) continue;
      expl_units[k].push_back(MetricsForPair(
          TopExplanations(explanations, u, entry.id, n), pair_truth, n));
    }
  });

  std::vector<PairMetrics> hit_pairs;
  for (const auto& per_user : expl_units) {
    hit_pairs.insert(hit_pairs.end(), per_user.begin(), per_user.end());
  }
  return {Average(rec_units, m), Average(hit_pairs, n)};
}

}  // namespace bper
