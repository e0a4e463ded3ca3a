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


// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
// FAIL. Pass criterion names as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bper/baselines.h"
#include "bper/config.h"
#include "bper/eval.h"
#include "bper/experiments.h"
#include "bper/models.h"
#include "bper/synthetic.h"
#include "checks.h"

namespace bper {
namespace {

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

// Planted-data settings shared by the recovery, joint and sparsity checks.
ExperimentConfig PlantedConfig() {
  ExperimentConfig c;
  c.hp.d = 10;
  c.hp.epochs = 100;
  c.hp.gamma = 0.05;
  c.hp.lambda = 0.01;
  c.hp.seed = 1;
  c.split.repetitions = 5;
  return c;
}

std::optional<double> MeanValue(const std::vector<CsvRow>& rows,
                                const std::string& model,
                                const std::string& hp_part,
                                const std::string& metric) {
  for (const auto& r : rows) {
    if (r.repetition == "mean" && r.model == model && r.metric == metric &&
        r.hyperparams.find(hp_part) != std::string::npos) {
      return r.value;
    }
  }
  return std::nullopt;
}

Outcome GradientOracle() {
  std::string detail;
  bool ok = true;
  for (auto t : checks::AllTrainers()) {
    double err = checks::GradientMaxError(t, 25, 2026);
    ok &= err <= 1e-3;
    detail += checks::TrainerName(t) + " " + Fmt("%.1e", err) + " ";
  }
  detail += "(25 instances each, bound 1e-3)";
  return {ok ? Verdict::kPass : Verdict::kFail, detail};
}

Outcome ModelEquivalence() {
  const double bper = checks::EmbeddingMaxError(50, 1, false);
  const double plus = checks::EmbeddingMaxError(50, 2, true);
  const std::size_t mismatches = checks::PitfRankingMismatches(50, 3);
  const bool ok = bper <= 1e-9 && plus <= 1e-9 && mismatches == 0;
  return {ok ? Verdict::kPass : Verdict::kFail,
          "bper->cd " + Fmt("%.1e", bper) + ", bper+->cd " + Fmt("%.1e", plus) +
              ", pitf ranking mismatches " + std::to_string(mismatches)};
}

Outcome MetricOracle() {
  const double err = checks::MetricMaxError(1000, 4);
  std::vector<double> scores(20);
  for (std::size_t k = 0; k < 20; ++k) scores[k] = 20.0 - k;
  std::vector<Index> all = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<Index> none = {15, 16};
  PairMetrics a = MetricsForPair(TopN(scores, 10), all, 10);
  PairMetrics z = MetricsForPair(TopN(scores, 10), none, 10);
  const bool ones = a.ndcg == 1.0 && a.precision == 1.0 && a.recall == 1.0 &&
                    a.f1 == 1.0;
  const bool zeros = z.ndcg == 0.0 && z.precision == 0.0 && z.recall == 0.0 &&
                     z.f1 == 0.0;
  const bool ok = err <= 1e-12 && ones && zeros;
  return {ok ? Verdict::kPass : Verdict::kFail,
          "max |diff| " + Fmt("%.1e", err) + " over 1000 instances, " +
              "all-relevant " + (ones ? "(1,1,1,1)" : "wrong") +
              ", zero-hit " + (zeros ? "(0,0,0,0)" : "wrong")};
}

Outcome SamplerUniformity() {
  checks::UniformityResult r = checks::SamplerUniformity(100000, 5);
  const bool ok = r.worst_z <= 3.0 && r.violations == 0;
  return {ok ? Verdict::kPass : Verdict::kFail,
          "worst chi2 z " + Fmt("%.2f", r.worst_z) + " (bound 3), " +
              std::to_string(r.violations) + " exclusion violations in " +
              std::to_string(r.draws) + " draws"};
}

Outcome PlantedRecovery() {
  ExperimentConfig c = PlantedConfig();
  SyntheticData syn = GenerateSynthetic(c.synthetic);
  double bper_ndcg = 0.0, rand_ndcg = 0.0, hit = 0.0;
  for (int rep = 0; rep < c.split.repetitions; ++rep) {
    Split split = SplitStore(syn.store, c.split, rep);
    InteractionStore train = split.FullTrain();
    Hyperparams hp = c.hp;
    hp.seed = c.hp.seed + rep;
    FittedModel bper = Fit(ModelKind::kBper, train, hp);
    FittedModel rand = Fit(ModelKind::kRand, train, hp);
    auto scorer = bper.ExplanationScorerFor();
    bper_ndcg += EvaluateExplanationRanking(*scorer, split.test, 10).ndcg;
    rand_ndcg += EvaluateExplanationRanking(*rand.ExplanationScorerFor(),
                                            split.test, 10).ndcg;
    hit += HitRate(*scorer, checks::PlantedTest(split.test, syn), 10);
  }
  const double reps = c.split.repetitions;
  bper_ndcg /= reps;
  rand_ndcg /= reps;
  hit /= reps;
  const bool ok = bper_ndcg >= 10.0 * rand_ndcg && hit >= 0.8;
  return {ok ? Verdict::kPass : Verdict::kFail,
          "BPER NDCG@10 " + Fmt("%.4f", bper_ndcg) + " vs RAND " +
              Fmt("%.4f", rand_ndcg) + " (" + Fmt("%.1f", bper_ndcg / rand_ndcg) +
              "x, need 10x), planted top-10 hit rate " + Fmt("%.3f", hit) +
              " (need 0.8)"};
}

Outcome JointDirection() {
  ExperimentConfig c = PlantedConfig();
  ExperimentResult r = RunAlphaSweep(c, LoadExperimentData(c));
  auto base = MeanValue(r.rows, "bper", "role=non-joint", "exp_f1");
  auto rec0 = MeanValue(r.rows, "bper-j", "role=reference", "rec_f1");
  if (!base || !rec0) return {Verdict::kFail, "missing reference rows"};
  std::string winners;
  for (double alpha : c.alpha_sweep) {
    if (alpha == 0.0) continue;
    const std::string tag = ";alpha=" + FormatDouble(alpha);
    auto exp = MeanValue(r.rows, "bper-j", tag, "exp_f1");
    auto rec = MeanValue(r.rows, "bper-j", tag, "rec_f1");
    if (exp && rec && *exp > *base && *rec >= *rec0) {
      winners += (winners.empty() ? "" : ",") + FormatDouble(alpha);
    }
  }
  return {winners.empty() ? Verdict::kFail : Verdict::kPass,
          "non-joint exp F1 " + Fmt("%.4f", *base) + ", alpha=0 rec F1 " +
              Fmt("%.4f", *rec0) + ", alphas improving both: " +
              (winners.empty() ? "none" : winners)};
}

Outcome SparsityTrend() {
  ExperimentConfig c = PlantedConfig();
  c.sparsity_models = {ModelKind::kPitf, ModelKind::kBper};
  ExperimentResult r = RunSparsity(c, LoadExperimentData(c));
  bool ok = true;
  std::string detail = "F1 bper/pitf:";
  for (double ratio : c.sparsity_ratios) {
    const std::string tag = "ratio=" + FormatDouble(ratio) + ";";
    auto b = MeanValue(r.rows, "bper", tag, "f1");
    auto p = MeanValue(r.rows, "pitf", tag, "f1");
    if (!b || !p) return {Verdict::kFail, "missing ratio " + FormatDouble(ratio)};
    ok &= *b >= *p;
    detail += " " + FormatDouble(ratio) + "=" + Fmt("%.4f", *b) + "/" +
              Fmt("%.4f", *p);
  }
  auto lo = MeanValue(r.rows, "bper", "ratio=0.3;", "f1");
  auto hi = MeanValue(r.rows, "bper", "ratio=0.7;", "f1");
  ok &= lo && hi && *hi > *lo;
  return {ok ? Verdict::kPass : Verdict::kFail, detail};
}

Outcome Determinism() {
  ExperimentConfig c;
  c.synthetic.num_users = 120;
  c.synthetic.num_items = 80;
  c.synthetic.num_explanations = 100;
  c.hp.d = 6;
  c.hp.epochs = 5;
  c.hp.gamma = 0.05;
  c.split.repetitions = 2;
  c.mu_sweep = {0.0, 0.5, 1.0};
  c.alpha_sweep = {0.0, 0.5};
  c.sparsity_ratios = {0.3, 0.7};
  c.joint_models = {ModelKind::kCdJ, ModelKind::kPitfJ, ModelKind::kBperJ};
  auto run = [&](std::size_t threads) {
    ExperimentConfig cc = c;
    cc.threads = threads;
    ExperimentData data = LoadExperimentData(cc);
    return FormatCsv(RunComparison(cc, data).rows) +
           FormatCsv(RunMuSweep(cc, data).rows) +
           FormatCsv(RunAlphaSweep(cc, data).rows) +
           FormatCsv(RunSparsity(cc, data).rows);
  };
  const std::string first = run(1);
  const std::string second = run(1);
  const std::string threaded = run(2);
  const bool ok = first == second && first == threaded;
  return {ok ? Verdict::kPass : Verdict::kFail,
          std::to_string(first.size()) + " CSV bytes from all four pipelines, " +
              (first == second ? "identical" : "different") + " on re-run, " +
              (first == threaded ? "identical" : "different") +
              " with 2 evaluation threads"};
}

Outcome FullScale() {
  const char* config_path = std::getenv("BPER_FULL_CONFIG");
  const char* data_path = std::getenv("BPER_AMAZON_PATH");
  if (!config_path && !data_path) {
    return {Verdict::kSkip,
            "set BPER_AMAZON_PATH (or BPER_FULL_CONFIG) to run on real data"};
  }
  ExperimentConfig c;
  if (config_path) {
    c = LoadConfig(config_path);
  } else {
    c.data = data_path;
    c.hp.d = 20;
    c.hp.lambda = 0.01;
    c.hp.gamma = 0.01;
    c.hp.epochs = 500;
  }
  c.models = {ModelKind::kRand, ModelKind::kRucf, ModelKind::kRicf,
              ModelKind::kCd, ModelKind::kPitf, ModelKind::kBper};
  ExperimentResult r = RunComparison(c, LoadExperimentData(c));
  std::map<std::string, double> ndcg;
  for (const auto& row : r.rows) {
    if (row.repetition == "mean" && row.metric == "ndcg") ndcg[row.model] = row.value;
  }
  const bool ok = ndcg["bper"] > ndcg["pitf"] && ndcg["pitf"] > ndcg["rucf"] &&
                  ndcg["pitf"] > ndcg["ricf"] && ndcg["rucf"] > ndcg["rand"] &&
                  ndcg["ricf"] > ndcg["rand"] && ndcg["rand"] > ndcg["cd"];
  std::string detail = "NDCG@10";
  for (const char* m : {"bper", "pitf", "rucf", "ricf", "rand", "cd"}) {
    detail += std::string(" ") + m + "=" + Fmt("%.5f", ndcg[m]);
  }
  return {ok ? Verdict::kPass : Verdict::kFail, detail};
}

struct Criterion {
  std::string name;
  double limit_seconds;  // 0: no runtime bound
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace bper

int main(int argc, char** argv) {
  using namespace bper;
  const std::vector<Criterion> criteria = {
      {"gradient-oracle", 30, GradientOracle},
      {"model-equivalence", 10, ModelEquivalence},
      {"metric-oracle", 5, MetricOracle},
      {"sampler-uniformity", 10, SamplerUniformity},
      {"planted-recovery", 600, PlantedRecovery},
      {"joint-direction", 1800, JointDirection},
      {"sparsity-trend", 1800, SparsityTrend},
      {"determinism", 0, Determinism},
      {"full-scale", 0, FullScale},
  };
  std::vector<std::string> only(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.name) == only.end()) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Verdict::kFail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    if (o.verdict == Verdict::kPass && c.limit_seconds > 0 &&
        secs > c.limit_seconds) {
      o.verdict = Verdict::kFail;
      o.detail += "; over the " + std::to_string(int(c.limit_seconds)) +
                  " s budget";
    }
    const char* tag = o.verdict == Verdict::kPass   ? "PASS"
                      : o.verdict == Verdict::kSkip ? "SKIP"
                                                    : "FAIL";
    if (o.verdict == Verdict::kFail) ++failures;
    std::printf("%s %s: %s [%.1f s]\n", tag, c.name.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
