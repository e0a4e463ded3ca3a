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


#include "bper/params.h"

#include <gtest/gtest.h>

#include "checks.h"
#include "oracles.h"

namespace bper {
namespace {

TEST(Score, MatchesScalarOracle) {
  oracle::Gen g(11);
  Universe u{4, 5, 6};
  for (int t = 0; t < 20; ++t) {
    auto fp = oracle::RandomFactors(u, 1 + oracle::Uniform(g, 6), g);
    auto cd = oracle::RandomCd(u, 3, g);
    auto emb = oracle::RandomEmbedding(6, 4, fp.d(), g);
    const double mu = 0.1 * t / 2.0;
    for (Index a = 0; a < 4; ++a) {
      for (Index b = 0; b < 5; ++b) {
        for (Index e = 0; e < 6; ++e) {
          EXPECT_NEAR(ScoreBper(fp, a, b, e, mu),
                      oracle::BperScore(fp, a, b, e, mu), 1e-12);
          EXPECT_NEAR(ScoreBperPlus(fp, emb, a, b, e, mu),
                      oracle::BperPlusScore(fp, emb, a, b, e, mu), 1e-12);
          EXPECT_NEAR(ScoreCd(cd, a, b, e), oracle::CdScore(cd, a, b, e), 1e-12);
          EXPECT_NEAR(ScorePitf(fp, a, b, e), oracle::PitfScore(fp, a, b, e),
                      1e-12);
        }
      }
    }
  }
}

TEST(Score, BlendIsLinearInMu) {
  oracle::Gen g(12);
  auto fp = oracle::RandomFactors({3, 3, 3}, 4, g);
  for (Index e = 0; e < 3; ++e) {
    const double user_side = ScoreUserExplanation(fp, 1, e);
    const double item_side = ScoreItemExplanation(fp, 2, e);
    EXPECT_DOUBLE_EQ(ScoreBper(fp, 1, 2, e, 1.0), user_side);
    EXPECT_DOUBLE_EQ(ScoreBper(fp, 1, 2, e, 0.0), item_side);
    EXPECT_NEAR(ScoreBper(fp, 1, 2, e, 0.3),
                0.3 * user_side + 0.7 * item_side, 1e-12);
  }
}

TEST(Score, ZeroParametersScoreZero) {
  Hyperparams hp;
  hp.d = 3;
  FactorParams fp = InitFactorParams({2, 2, 2}, hp, 0.0);
  CDParams cd = InitCDParams({2, 2, 2}, hp, 0.0);
  EXPECT_EQ(ScoreBper(fp, 1, 1, 1, 0.7), 0.0);
  EXPECT_EQ(ScorePitf(fp, 0, 1, 0), 0.0);
  EXPECT_EQ(ScoreCd(cd, 1, 0, 1), 0.0);
  EXPECT_EQ(ScoreItem(fp, 1, 1), 0.0);
}

TEST(Score, ProjectedMatchesUnprojected) {
  oracle::Gen g(13);
  auto fp = oracle::RandomFactors({3, 3, 5}, 4, g);
  auto emb = oracle::RandomEmbedding(5, 7, 4, g);
  Matrix proj = emb.ProjectAll();
  for (Index e = 0; e < 5; ++e) {
    EXPECT_NEAR(ScoreBperPlusProjected(fp, proj.row(e), 2, 1, e, 0.6),
                ScoreBperPlus(fp, emb, 2, 1, e, 0.6), 1e-12);
  }
}

TEST(Embedding, BperIntoCdReproducesScores) {
  EXPECT_LE(checks::EmbeddingMaxError(30, 21, false), 1e-9);
}

TEST(Embedding, BperPlusIntoCdReproducesScores) {
  EXPECT_LE(checks::EmbeddingMaxError(30, 22, true), 1e-9);
}

TEST(Embedding, DimensionIsTwoDPlusTwo) {
  oracle::Gen g(23);
  auto fp = oracle::RandomFactors({2, 3, 4}, 5, g);
  CDParams cd = EmbedBperIntoCd(fp, 0.4);
  EXPECT_EQ(cd.d(), 12u);
  EXPECT_EQ(cd.user.rows(), 2u);
  EXPECT_EQ(cd.item.rows(), 3u);
  EXPECT_EQ(cd.expl.rows(), 4u);
}

TEST(Embedding, LiteralElseBranchesScaleByMuTimesOneMinusMu) {
  // Filling every non-factor slot with mu (user side) and 1 - mu (item side)
  // multiplies the whole score by mu (1 - mu).
  oracle::Gen g(24);
  auto fp = oracle::RandomFactors({2, 2, 3}, 2, g);
  const double mu = 0.3;
  const std::size_t d = fp.d();
  CDParams literal = EmbedBperIntoCd(fp, mu);
  for (Index a = 0; a < 2; ++a) {
    for (std::size_t k = d; k < 2 * d + 2; ++k) literal.user(a, k) = mu;
  }
  for (Index b = 0; b < 2; ++b) {
    for (std::size_t k = 0; k < d; ++k) literal.item(b, k) = 1.0 - mu;
    literal.item(b, 2 * d) = 1.0 - mu;
  }
  for (Index e = 0; e < 3; ++e) {
    const double plain = ScoreUserExplanation(fp, 1, e) +
                         ScoreItemExplanation(fp, 0, e);
    EXPECT_NEAR(ScoreCd(literal, 1, 0, e), mu * (1 - mu) * plain, 1e-12);
    EXPECT_NEAR(ScoreCd(EmbedBperIntoCd(fp, mu), 1, 0, e),
                ScoreBper(fp, 1, 0, e, mu), 1e-12);
  }
}

TEST(Embedding, BiasFreeBperAtHalfRanksLikePitf) {
  EXPECT_EQ(checks::PitfRankingMismatches(30, 25), 0u);
}

TEST(Init, DeterministicAndShaped) {
  Hyperparams hp;
  hp.d = 4;
  hp.seed = 9;
  Universe u{3, 4, 5};
  FactorParams a = InitFactorParams(u, hp);
  FactorParams b = InitFactorParams(u, hp);
  EXPECT_EQ(a, b);
  EXPECT_NO_THROW(a.CheckShape(u));
  EXPECT_THROW(a.CheckShape({3, 4, 6}), std::exception);
  hp.seed = 10;
  EXPECT_FALSE(InitFactorParams(u, hp) == a);
  for (double x : a.expl_user_bias) EXPECT_EQ(x, 0.0);
}

TEST(Init, ProjectionStartsNearIdentityGate) {
  oracle::Gen g(26);
  EmbeddingTable emb;
  emb.raw = oracle::RandomMatrix(5, 8, 1.0, g);
  InitProjection(emb, 3, 1);
  EXPECT_EQ(emb.d(), 3u);
  EXPECT_EQ(emb.weight.cols(), 8u);
  for (double c : emb.bias) EXPECT_EQ(c, 1.0);
}

TEST(Hyperparams, ValidateRejectsBadValues) {
  Hyperparams hp;
  EXPECT_NO_THROW(hp.Validate());
  auto bad = [](auto edit) {
    Hyperparams h;
    edit(h);
    EXPECT_THROW(h.Validate(), std::invalid_argument);
  };
  bad([](Hyperparams& h) { h.d = 0; });
  bad([](Hyperparams& h) { h.gamma = 0.0; });
  bad([](Hyperparams& h) { h.lambda = -1.0; });
  bad([](Hyperparams& h) { h.mu = 1.5; });
  bad([](Hyperparams& h) { h.alpha = -0.1; });
}

}  // namespace
}  // namespace bper
