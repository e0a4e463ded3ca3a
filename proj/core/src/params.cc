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

#include <cmath>
#include <stdexcept>

#include "bper/random.h"

namespace bper {

namespace {

void FillGaussian(Matrix& m, Rng& rng, double scale) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& x : m.data()) x = scale * normal(rng);
}

void CheckIndex(std::size_t idx, std::size_t n, const char* what) {
  if (idx >= n) {
    throw std::out_of_range(std::string(what) + " index " +
                            std::to_string(idx) + " out of range");
  }
}

void CheckRows(const Matrix& m, std::size_t rows, std::size_t d,
               const char* what) {
  if (m.rows() != rows || m.cols() != d) {
    throw std::invalid_argument(std::string(what) + " has shape " +
                                std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected " +
                                std::to_string(rows) + "x" + std::to_string(d));
  }
}

}  // namespace

void Hyperparams::Validate() const {
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw std::invalid_argument("mu must lie in [0, 1]");
  }
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
}

bool FactorParams::AllFinite() const {
  return bper::AllFinite(user.data()) && bper::AllFinite(item.data()) &&
         bper::AllFinite(expl_user.data()) &&
         bper::AllFinite(expl_item.data()) &&
         bper::AllFinite(expl_user_bias) && bper::AllFinite(expl_item_bias) &&
         bper::AllFinite(item_bias);
}

void FactorParams::CheckShape(const Universe& u) const {
  const std::size_t k = d();
  CheckRows(user, u.users, k, "P");
  CheckRows(item, u.items, k, "Q");
  CheckRows(expl_user, u.explanations, k, "O^U");
  CheckRows(expl_item, u.explanations, k, "O^I");
  if (expl_user_bias.size() != u.explanations ||
      expl_item_bias.size() != u.explanations ||
      item_bias.size() != u.items) {
    throw std::invalid_argument("bias vector length mismatch");
  }
}

bool CDParams::AllFinite() const {
  return bper::AllFinite(user.data()) && bper::AllFinite(item.data()) &&
         bper::AllFinite(expl.data());
}

void CDParams::CheckShape(const Universe& u) const {
  CheckRows(user, u.users, d(), "P");
  CheckRows(item, u.items, d(), "Q");
  CheckRows(expl, u.explanations, d(), "O");
}

void EmbeddingTable::Project(Index e, std::span<double> out) const {
  CheckIndex(e, raw.rows(), "explanation");
  if (out.size() != weight.rows() || bias.size() != weight.rows() ||
      weight.cols() != raw.cols()) {
    throw std::invalid_argument("embedding projection dimension mismatch");
  }
  auto x = raw.row(e);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = Dot(weight.row(k), x) + bias[k];
  }
}

Matrix EmbeddingTable::ProjectAll() const {
  Matrix out(raw.rows(), weight.rows());
  for (std::size_t e = 0; e < raw.rows(); ++e) {
    Project(static_cast<Index>(e), out.row(e));
  }
  return out;
}

bool EmbeddingTable::AllFinite() const {
  return bper::AllFinite(raw.data()) && bper::AllFinite(weight.data()) &&
         bper::AllFinite(bias);
}

FactorParams InitFactorParams(const Universe& universe, const Hyperparams& hp,
                              double init_scale) {
  hp.Validate();
  Rng rng = MakeRng(hp.seed, 0x1a17u);
  FactorParams fp{
      Matrix(universe.users, hp.d),        Matrix(universe.items, hp.d),
      Matrix(universe.explanations, hp.d), Matrix(universe.explanations, hp.d),
      std::vector<double>(universe.explanations, 0.0),
      std::vector<double>(universe.explanations, 0.0),
      std::vector<double>(universe.items, 0.0)};
  FillGaussian(fp.user, rng, init_scale);
  FillGaussian(fp.item, rng, init_scale);
  FillGaussian(fp.expl_user, rng, init_scale);
  FillGaussian(fp.expl_item, rng, init_scale);
  return fp;
}

CDParams InitCDParams(const Universe& universe, const Hyperparams& hp,
                      double init_scale) {
  hp.Validate();
  Rng rng = MakeRng(hp.seed, 0xcdu);
  CDParams cd{Matrix(universe.users, hp.d), Matrix(universe.items, hp.d),
              Matrix(universe.explanations, hp.d)};
  FillGaussian(cd.user, rng, init_scale);
  FillGaussian(cd.item, rng, init_scale);
  FillGaussian(cd.expl, rng, init_scale);
  return cd;
}

void InitProjection(EmbeddingTable& emb, std::size_t d, std::uint64_t seed,
                    double init_scale) {
  Rng rng = MakeRng(seed, 0xe3bu);
  emb.weight = Matrix(d, emb.emb_dim());
  double scale = emb.emb_dim() > 0
                     ? init_scale / std::sqrt(static_cast<double>(emb.emb_dim()))
                     : 0.0;
  FillGaussian(emb.weight, rng, scale);
  emb.bias.assign(d, 1.0);
}

double ScoreUserExplanation(const FactorParams& fp, Index u, Index e) {
  CheckIndex(u, fp.user.rows(), "user");
  CheckIndex(e, fp.expl_user.rows(), "explanation");
  return Dot(fp.user.row(u), fp.expl_user.row(e)) + fp.expl_user_bias[e];
}

double ScoreItemExplanation(const FactorParams& fp, Index i, Index e) {
  CheckIndex(i, fp.item.rows(), "item");
  CheckIndex(e, fp.expl_item.rows(), "explanation");
  return Dot(fp.item.row(i), fp.expl_item.row(e)) + fp.expl_item_bias[e];
}

double ScoreBper(const FactorParams& fp, Index u, Index i, Index e,
                 double mu) {
  return mu * ScoreUserExplanation(fp, u, e) +
         (1.0 - mu) * ScoreItemExplanation(fp, i, e);
}

double ScoreBperPlusProjected(const FactorParams& fp,
                              std::span<const double> proj, Index u, Index i,
                              Index e, double mu) {
  CheckIndex(u, fp.user.rows(), "user");
  CheckIndex(i, fp.item.rows(), "item");
  CheckIndex(e, fp.expl_user.rows(), "explanation");
  if (proj.size() != fp.d()) {
    throw std::invalid_argument("projection length differs from d");
  }
  double user_score =
      Dot3(fp.user.row(u), fp.expl_user.row(e), proj) + fp.expl_user_bias[e];
  double item_score =
      Dot3(fp.item.row(i), fp.expl_item.row(e), proj) + fp.expl_item_bias[e];
  return mu * user_score + (1.0 - mu) * item_score;
}

double ScoreBperPlus(const FactorParams& fp, const EmbeddingTable& emb,
                     Index u, Index i, Index e, double mu) {
  if (emb.d() != fp.d()) {
    throw std::invalid_argument("embedding projects to " +
                                std::to_string(emb.d()) + " dims, model has " +
                                std::to_string(fp.d()));
  }
  std::vector<double> proj(fp.d());
  emb.Project(e, proj);
  return ScoreBperPlusProjected(fp, proj, u, i, e, mu);
}

double ScoreCd(const CDParams& cd, Index u, Index i, Index e) {
  CheckIndex(u, cd.user.rows(), "user");
  CheckIndex(i, cd.item.rows(), "item");
  CheckIndex(e, cd.expl.rows(), "explanation");
  auto p = cd.user.row(u);
  auto q = cd.item.row(i);
  auto o = cd.expl.row(e);
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) sum += p[k] * q[k] * o[k];
  return sum;
}

double ScorePitf(const FactorParams& fp, Index u, Index i, Index e) {
  CheckIndex(u, fp.user.rows(), "user");
  CheckIndex(i, fp.item.rows(), "item");
  CheckIndex(e, fp.expl_user.rows(), "explanation");
  return Dot(fp.user.row(u), fp.expl_user.row(e)) +
         Dot(fp.item.row(i), fp.expl_item.row(e));
}

double ScoreItem(const FactorParams& fp, Index u, Index i) {
  CheckIndex(u, fp.user.rows(), "user");
  CheckIndex(i, fp.item.rows(), "item");
  return Dot(fp.user.row(u), fp.item.row(i)) + fp.item_bias[i];
}

double ScoreItem(const CDParams& cd, Index u, Index i) {
  CheckIndex(u, cd.user.rows(), "user");
  CheckIndex(i, cd.item.rows(), "item");
  return Dot(cd.user.row(u), cd.item.row(i));
}

namespace {

CDParams EmbedWithScale(const FactorParams& fp, const Matrix* proj,
                        double mu) {
  const std::size_t d = fp.d();
  const std::size_t dim = 2 * d + 2;
  CDParams cd{Matrix(fp.user.rows(), dim, 1.0), Matrix(fp.item.rows(), dim, 1.0),
              Matrix(fp.expl_user.rows(), dim)};
  for (std::size_t u = 0; u < fp.user.rows(); ++u) {
    for (std::size_t k = 0; k < d; ++k) cd.user(u, k) = mu * fp.user(u, k);
    cd.user(u, 2 * d) = mu;
  }
  for (std::size_t i = 0; i < fp.item.rows(); ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      cd.item(i, d + k) = (1.0 - mu) * fp.item(i, k);
    }
    cd.item(i, 2 * d + 1) = 1.0 - mu;
  }
  for (std::size_t e = 0; e < fp.expl_user.rows(); ++e) {
    for (std::size_t k = 0; k < d; ++k) {
      double scale = proj ? (*proj)(e, k) : 1.0;
      cd.expl(e, k) = fp.expl_user(e, k) * scale;
      cd.expl(e, d + k) = fp.expl_item(e, k) * scale;
    }
    cd.expl(e, 2 * d) = fp.expl_user_bias[e];
    cd.expl(e, 2 * d + 1) = fp.expl_item_bias[e];
  }
  return cd;
}

}  // namespace

CDParams EmbedBperIntoCd(const FactorParams& fp, double mu) {
  return EmbedWithScale(fp, nullptr, mu);
}

CDParams EmbedBperPlusIntoCd(const FactorParams& fp, const EmbeddingTable& emb,
                             double mu) {
  if (emb.d() != fp.d() || emb.raw.rows() != fp.expl_user.rows()) {
    throw std::invalid_argument("embedding table does not match the model");
  }
  Matrix proj = emb.ProjectAll();
  return EmbedWithScale(fp, &proj, mu);
}

}  // namespace bper
