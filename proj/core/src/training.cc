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

#include "bper/training.h"

#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string_view>

#include "bper/sampler.h"

namespace bper {

namespace {

using Vec = std::span<double>;
using CVec = std::span<const double>;

// Sampler stream ids keep the training draws independent of the
// initialization draws made from the same seed.
constexpr std::uint64_t kSamplerStream = 0x5eed;

// theta <- theta - gamma * (coef * dir + lambda * theta)
void Update(Vec theta, double coef, CVec dir, double gamma, double lambda) {
  for (std::size_t k = 0; k < theta.size(); ++k) {
    theta[k] -= gamma * (coef * dir[k] + lambda * theta[k]);
  }
}

// theta <- theta - gamma * (coef * (a - b) + lambda * theta)
void UpdateDiff(Vec theta, double coef, CVec a, CVec b, double gamma,
                double lambda) {
  for (std::size_t k = 0; k < theta.size(); ++k) {
    theta[k] -= gamma * (coef * (a[k] - b[k]) + lambda * theta[k]);
  }
}

// theta <- theta - gamma * (grad + lambda * theta)
void Apply(Vec theta, CVec grad, double gamma, double lambda) {
  for (std::size_t k = 0; k < theta.size(); ++k) {
    theta[k] -= gamma * (grad[k] + lambda * theta[k]);
  }
}

void ApplyScalar(double& theta, double grad, double gamma, double lambda) {
  theta -= gamma * (grad + lambda * theta);
}

void CheckTrainable(const InteractionStore& train, const Hyperparams& hp,
                    bool needs_items) {
  hp.Validate();
  if (train.empty()) throw TrainingError("training store is empty");
  if (train.num_explanations() < 2) {
    throw TrainingError("need at least two explanations");
  }
  if (needs_items && train.num_items() < 2) {
    throw TrainingError("joint training needs at least two items");
  }
}

bool Finite(const FactorParams& p) { return p.AllFinite(); }
bool Finite(const CDParams& p) { return p.AllFinite(); }
bool Finite(const BperPlusParams& p) {
  return p.factors.AllFinite() && p.embedding.AllFinite();
}

// Runs hp.epochs epochs of |T| calls to `step`, which returns the sampled
// loss or nullopt when the sample had to be skipped.
template <typename Params, typename Step>
TrainReport RunEpochs(const InteractionStore& train, const Hyperparams& hp,
                      const TrainOptions& opts, std::string_view name,
                      Params params, Step&& step) {
  TrainReport report;
  Sampler sampler(train, hp.seed, kSamplerStream);
  const std::size_t steps = train.triple_count();
  for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
    auto start = std::chrono::steady_clock::now();
    double loss_sum = 0.0;
    std::size_t used = 0;
    for (std::size_t t = 0; t < steps; ++t) {
      std::optional<double> loss = step(params, sampler);
      if (loss) {
        loss_sum += *loss;
        ++used;
      } else {
        ++report.skipped_samples;
      }
    }
    std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    double mean = used > 0 ? loss_sum / static_cast<double>(used) : 0.0;
    report.epoch_losses.push_back(mean);
    report.epoch_seconds.push_back(elapsed.count());
    if (!Finite(params)) {
      throw TrainingError(std::string(name) +
                          ": non-finite parameter after epoch " +
                          std::to_string(epoch + 1));
    }
    if (opts.progress) {
      char line[128];
      std::snprintf(line, sizeof(line), "[%s] epoch %zu loss %.6f time %.3fs\n",
                    std::string(name).c_str(), epoch + 1, mean,
                    elapsed.count());
      *opts.progress << line;
    }
  }
  if (report.skipped_samples > 0) {
    report.notes.push_back(std::to_string(report.skipped_samples) +
                           " samples skipped: complement set was empty");
  }
  report.final_params = std::move(params);
  return report;
}

std::optional<ExplanationSample> DrawExplanationSample(Sampler& sampler) {
  const Triple& t = sampler.DrawTriple();
  auto e_user = sampler.DrawExplanationNotOfUser(t.user);
  auto e_item = sampler.DrawExplanationNotOfItem(t.item);
  if (!e_user || !e_item) return std::nullopt;
  return ExplanationSample{t.user, t.item, t.explanation, *e_user, *e_item};
}

std::optional<JointSample> DrawJointSample(Sampler& sampler) {
  auto s = DrawExplanationSample(sampler);
  if (!s) return std::nullopt;
  auto i_neg = sampler.DrawItemNotOfUser(s->user);
  if (!i_neg) return std::nullopt;
  return JointSample{*s, *i_neg};
}

std::optional<TripleSample> DrawTripleSample(Sampler& sampler) {
  const Triple& t = sampler.DrawTriple();
  auto e_neg = sampler.DrawExplanationNotOfPair(t.user, t.item);
  if (!e_neg) return std::nullopt;
  return TripleSample{t.user, t.item, t.explanation, *e_neg};
}

std::optional<TripleJointSample> DrawTripleJointSample(Sampler& sampler) {
  auto s = DrawTripleSample(sampler);
  if (!s) return std::nullopt;
  auto i_neg = sampler.DrawItemNotOfUser(s->user);
  if (!i_neg) return std::nullopt;
  return TripleJointSample{*s, *i_neg};
}

}  // namespace

double BperStep(FactorParams& fp, const ExplanationSample& s, double gamma,
                double lambda) {
  Vec p = fp.user.row(s.user);
  Vec q = fp.item.row(s.item);
  Vec ou_pos = fp.expl_user.row(s.expl);
  Vec ou_neg = fp.expl_user.row(s.expl_user_neg);
  Vec oi_pos = fp.expl_item.row(s.expl);
  Vec oi_neg = fp.expl_item.row(s.expl_item_neg);
  auto& bu = fp.expl_user_bias;
  auto& bi = fp.expl_item_bias;

  const double r_user = (Dot(p, ou_pos) + bu[s.expl]) -
                        (Dot(p, ou_neg) + bu[s.expl_user_neg]);
  const double r_item = (Dot(q, oi_pos) + bi[s.expl]) -
                        (Dot(q, oi_neg) + bi[s.expl_item_neg]);
  const double x = -Sigmoid(-r_user);
  const double y = -Sigmoid(-r_item);
  const double loss = NegLogSigmoid(r_user) + NegLogSigmoid(r_item);

  UpdateDiff(p, x, ou_pos, ou_neg, gamma, lambda);
  UpdateDiff(q, y, oi_pos, oi_neg, gamma, lambda);
  Update(ou_pos, x, p, gamma, lambda);
  Update(ou_neg, -x, p, gamma, lambda);
  Update(oi_pos, y, q, gamma, lambda);
  Update(oi_neg, -y, q, gamma, lambda);
  ApplyScalar(bu[s.expl], x, gamma, lambda);
  ApplyScalar(bu[s.expl_user_neg], -x, gamma, lambda);
  ApplyScalar(bi[s.expl], y, gamma, lambda);
  ApplyScalar(bi[s.expl_item_neg], -y, gamma, lambda);
  return loss;
}

double BperJStep(FactorParams& fp, const JointSample& js, double gamma,
                 double lambda, double alpha) {
  const ExplanationSample& s = js.expl;
  Vec p = fp.user.row(s.user);
  Vec q = fp.item.row(s.item);
  Vec q_neg = fp.item.row(js.item_neg);
  Vec ou_pos = fp.expl_user.row(s.expl);
  Vec ou_neg = fp.expl_user.row(s.expl_user_neg);
  Vec oi_pos = fp.expl_item.row(s.expl);
  Vec oi_neg = fp.expl_item.row(s.expl_item_neg);
  auto& bu = fp.expl_user_bias;
  auto& bi = fp.expl_item_bias;
  auto& b = fp.item_bias;

  const double r_user = (Dot(p, ou_pos) + bu[s.expl]) -
                        (Dot(p, ou_neg) + bu[s.expl_user_neg]);
  const double r_item = (Dot(q, oi_pos) + bi[s.expl]) -
                        (Dot(q, oi_neg) + bi[s.expl_item_neg]);
  const double r_rec =
      (Dot(p, q) + b[s.item]) - (Dot(p, q_neg) + b[js.item_neg]);
  const double x = -alpha * Sigmoid(-r_user);
  const double y = -alpha * Sigmoid(-r_item);
  const double z = -Sigmoid(-r_rec);
  const double loss = NegLogSigmoid(r_rec) +
                      alpha * (NegLogSigmoid(r_user) + NegLogSigmoid(r_item));

  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] -= gamma * (x * (ou_pos[k] - ou_neg[k]) + z * (q[k] - q_neg[k]) +
                     lambda * p[k]);
  }
  for (std::size_t k = 0; k < q.size(); ++k) {
    q[k] -= gamma * (y * (oi_pos[k] - oi_neg[k]) + z * p[k] + lambda * q[k]);
  }
  Update(q_neg, -z, p, gamma, lambda);
  Update(ou_pos, x, p, gamma, lambda);
  Update(ou_neg, -x, p, gamma, lambda);
  Update(oi_pos, y, q, gamma, lambda);
  Update(oi_neg, -y, q, gamma, lambda);
  ApplyScalar(b[s.item], z, gamma, lambda);
  ApplyScalar(b[js.item_neg], -z, gamma, lambda);
  ApplyScalar(bu[s.expl], x, gamma, lambda);
  ApplyScalar(bu[s.expl_user_neg], -x, gamma, lambda);
  ApplyScalar(bi[s.expl], y, gamma, lambda);
  ApplyScalar(bi[s.expl_item_neg], -y, gamma, lambda);
  return loss;
}

double BperPlusStep(BperPlusParams& bp, const ExplanationSample& s,
                    double gamma, double lambda, bool train_projection,
                    double projection_lambda) {
  FactorParams& fp = bp.factors;
  EmbeddingTable& emb = bp.embedding;
  const std::size_t d = fp.d();

  std::vector<double> m_pos(d), m_user_neg(d), m_item_neg(d);
  emb.Project(s.expl, m_pos);
  emb.Project(s.expl_user_neg, m_user_neg);
  emb.Project(s.expl_item_neg, m_item_neg);

  Vec p = fp.user.row(s.user);
  Vec q = fp.item.row(s.item);
  Vec ou_pos = fp.expl_user.row(s.expl);
  Vec ou_neg = fp.expl_user.row(s.expl_user_neg);
  Vec oi_pos = fp.expl_item.row(s.expl);
  Vec oi_neg = fp.expl_item.row(s.expl_item_neg);
  auto& bu = fp.expl_user_bias;
  auto& bi = fp.expl_item_bias;

  const double r_user = (Dot3(p, ou_pos, m_pos) + bu[s.expl]) -
                        (Dot3(p, ou_neg, m_user_neg) + bu[s.expl_user_neg]);
  const double r_item = (Dot3(q, oi_pos, m_pos) + bi[s.expl]) -
                        (Dot3(q, oi_neg, m_item_neg) + bi[s.expl_item_neg]);
  const double x = -Sigmoid(-r_user);
  const double y = -Sigmoid(-r_item);
  const double loss = NegLogSigmoid(r_user) + NegLogSigmoid(r_item);

  // Gradients w.r.t. the three projected vectors, from pre-step factors.
  std::vector<double> g_pos, g_user_neg, g_item_neg;
  if (train_projection) {
    g_pos.resize(d);
    g_user_neg.resize(d);
    g_item_neg.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
      g_pos[k] = x * p[k] * ou_pos[k] + y * q[k] * oi_pos[k];
      g_user_neg[k] = -x * p[k] * ou_neg[k];
      g_item_neg[k] = -y * q[k] * oi_neg[k];
    }
  }

  // Same rule order as BperStep with o replaced by o (.) m.
  for (std::size_t k = 0; k < d; ++k) {
    p[k] -= gamma * (x * (ou_pos[k] * m_pos[k] - ou_neg[k] * m_user_neg[k]) +
                     lambda * p[k]);
  }
  for (std::size_t k = 0; k < d; ++k) {
    q[k] -= gamma * (y * (oi_pos[k] * m_pos[k] - oi_neg[k] * m_item_neg[k]) +
                     lambda * q[k]);
  }
  for (std::size_t k = 0; k < d; ++k) {
    ou_pos[k] -= gamma * (x * p[k] * m_pos[k] + lambda * ou_pos[k]);
  }
  for (std::size_t k = 0; k < d; ++k) {
    ou_neg[k] -= gamma * (-x * p[k] * m_user_neg[k] + lambda * ou_neg[k]);
  }
  for (std::size_t k = 0; k < d; ++k) {
    oi_pos[k] -= gamma * (y * q[k] * m_pos[k] + lambda * oi_pos[k]);
  }
  for (std::size_t k = 0; k < d; ++k) {
    oi_neg[k] -= gamma * (-y * q[k] * m_item_neg[k] + lambda * oi_neg[k]);
  }
  ApplyScalar(bu[s.expl], x, gamma, lambda);
  ApplyScalar(bu[s.expl_user_neg], -x, gamma, lambda);
  ApplyScalar(bi[s.expl], y, gamma, lambda);
  ApplyScalar(bi[s.expl_item_neg], -y, gamma, lambda);

  if (train_projection) {
    // d(proj_e)/dW = outer(., raw_e), d(proj_e)/dc = identity.
    std::vector<double> grad_c(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
      grad_c[k] = g_pos[k] + g_user_neg[k] + g_item_neg[k];
    }
    auto raw_pos = emb.raw.row(s.expl);
    auto raw_user_neg = emb.raw.row(s.expl_user_neg);
    auto raw_item_neg = emb.raw.row(s.expl_item_neg);
    for (std::size_t k = 0; k < d; ++k) {
      Vec w = emb.weight.row(k);
      for (std::size_t j = 0; j < w.size(); ++j) {
        double grad = g_pos[k] * raw_pos[j] + g_user_neg[k] * raw_user_neg[j] +
                      g_item_neg[k] * raw_item_neg[j];
        w[j] -= gamma * (grad + projection_lambda * w[j]);
      }
    }
    Apply(emb.bias, grad_c, gamma, projection_lambda);
  }
  return loss;
}

double CdStep(CDParams& cd, const TripleSample& s, double gamma,
              double lambda) {
  Vec p = cd.user.row(s.user);
  Vec q = cd.item.row(s.item);
  Vec o_pos = cd.expl.row(s.expl);
  Vec o_neg = cd.expl.row(s.expl_neg);
  const std::size_t d = p.size();

  double r = 0.0;
  for (std::size_t k = 0; k < d; ++k) r += p[k] * q[k] * (o_pos[k] - o_neg[k]);
  const double x = -Sigmoid(-r);
  const double loss = NegLogSigmoid(r);

  std::vector<double> gp(d), gq(d), go(d);
  for (std::size_t k = 0; k < d; ++k) {
    gp[k] = x * q[k] * (o_pos[k] - o_neg[k]);
    gq[k] = x * p[k] * (o_pos[k] - o_neg[k]);
    go[k] = x * p[k] * q[k];
  }
  Apply(p, gp, gamma, lambda);
  Apply(q, gq, gamma, lambda);
  Apply(o_pos, go, gamma, lambda);
  for (double& g : go) g = -g;
  Apply(o_neg, go, gamma, lambda);
  return loss;
}

double PitfStep(FactorParams& fp, const TripleSample& s, double gamma,
                double lambda) {
  Vec p = fp.user.row(s.user);
  Vec q = fp.item.row(s.item);
  Vec ou_pos = fp.expl_user.row(s.expl);
  Vec ou_neg = fp.expl_user.row(s.expl_neg);
  Vec oi_pos = fp.expl_item.row(s.expl);
  Vec oi_neg = fp.expl_item.row(s.expl_neg);
  const std::size_t d = p.size();

  const double r = (Dot(p, ou_pos) + Dot(q, oi_pos)) -
                   (Dot(p, ou_neg) + Dot(q, oi_neg));
  const double x = -Sigmoid(-r);
  const double loss = NegLogSigmoid(r);

  std::vector<double> gp(d), gq(d), gou(d), goi(d);
  for (std::size_t k = 0; k < d; ++k) {
    gp[k] = x * (ou_pos[k] - ou_neg[k]);
    gq[k] = x * (oi_pos[k] - oi_neg[k]);
    gou[k] = x * p[k];
    goi[k] = x * q[k];
  }
  Apply(p, gp, gamma, lambda);
  Apply(q, gq, gamma, lambda);
  Apply(ou_pos, gou, gamma, lambda);
  Apply(oi_pos, goi, gamma, lambda);
  for (std::size_t k = 0; k < d; ++k) {
    gou[k] = -gou[k];
    goi[k] = -goi[k];
  }
  Apply(ou_neg, gou, gamma, lambda);
  Apply(oi_neg, goi, gamma, lambda);
  return loss;
}

double CdJStep(CDParams& cd, const TripleJointSample& js, double gamma,
               double lambda, double alpha) {
  const TripleSample& s = js.expl;
  Vec p = cd.user.row(s.user);
  Vec q = cd.item.row(s.item);
  Vec q_neg = cd.item.row(js.item_neg);
  Vec o_pos = cd.expl.row(s.expl);
  Vec o_neg = cd.expl.row(s.expl_neg);
  const std::size_t d = p.size();

  double r = 0.0;
  for (std::size_t k = 0; k < d; ++k) r += p[k] * q[k] * (o_pos[k] - o_neg[k]);
  const double r_rec = Dot(p, q) - Dot(p, q_neg);
  const double x = -alpha * Sigmoid(-r);
  const double z = -Sigmoid(-r_rec);
  const double loss = NegLogSigmoid(r_rec) + alpha * NegLogSigmoid(r);

  std::vector<double> gp(d), gq(d), gq_neg(d), go(d);
  for (std::size_t k = 0; k < d; ++k) {
    gp[k] = x * q[k] * (o_pos[k] - o_neg[k]) + z * (q[k] - q_neg[k]);
    gq[k] = x * p[k] * (o_pos[k] - o_neg[k]) + z * p[k];
    gq_neg[k] = -z * p[k];
    go[k] = x * p[k] * q[k];
  }
  Apply(p, gp, gamma, lambda);
  Apply(q, gq, gamma, lambda);
  Apply(q_neg, gq_neg, gamma, lambda);
  Apply(o_pos, go, gamma, lambda);
  for (double& g : go) g = -g;
  Apply(o_neg, go, gamma, lambda);
  return loss;
}

double PitfJStep(FactorParams& fp, const TripleJointSample& js, double gamma,
                 double lambda, double alpha) {
  const TripleSample& s = js.expl;
  Vec p = fp.user.row(s.user);
  Vec q = fp.item.row(s.item);
  Vec q_neg = fp.item.row(js.item_neg);
  Vec ou_pos = fp.expl_user.row(s.expl);
  Vec ou_neg = fp.expl_user.row(s.expl_neg);
  Vec oi_pos = fp.expl_item.row(s.expl);
  Vec oi_neg = fp.expl_item.row(s.expl_neg);
  const std::size_t d = p.size();

  const double r = (Dot(p, ou_pos) + Dot(q, oi_pos)) -
                   (Dot(p, ou_neg) + Dot(q, oi_neg));
  const double r_rec = Dot(p, q) - Dot(p, q_neg);
  const double x = -alpha * Sigmoid(-r);
  const double z = -Sigmoid(-r_rec);
  const double loss = NegLogSigmoid(r_rec) + alpha * NegLogSigmoid(r);

  std::vector<double> gp(d), gq(d), gq_neg(d), gou(d), goi(d);
  for (std::size_t k = 0; k < d; ++k) {
    gp[k] = x * (ou_pos[k] - ou_neg[k]) + z * (q[k] - q_neg[k]);
    gq[k] = x * (oi_pos[k] - oi_neg[k]) + z * p[k];
    gq_neg[k] = -z * p[k];
    gou[k] = x * p[k];
    goi[k] = x * q[k];
  }
  Apply(p, gp, gamma, lambda);
  Apply(q, gq, gamma, lambda);
  Apply(q_neg, gq_neg, gamma, lambda);
  Apply(ou_pos, gou, gamma, lambda);
  Apply(oi_pos, goi, gamma, lambda);
  for (std::size_t k = 0; k < d; ++k) {
    gou[k] = -gou[k];
    goi[k] = -goi[k];
  }
  Apply(ou_neg, gou, gamma, lambda);
  Apply(oi_neg, goi, gamma, lambda);
  return loss;
}

TrainReport TrainBper(const InteractionStore& train, const Hyperparams& hp,
                      const TrainOptions& opts) {
  CheckTrainable(train, hp, false);
  return RunEpochs(train, hp, opts, "bper",
                   InitFactorParams(train.universe(), hp, opts.init_scale),
                   [&](FactorParams& fp, Sampler& sampler) -> std::optional<double> {
                     auto s = DrawExplanationSample(sampler);
                     if (!s) return std::nullopt;
                     return BperStep(fp, *s, hp.gamma, hp.lambda);
                   });
}

TrainReport TrainBperJ(const InteractionStore& train, const Hyperparams& hp,
                       const TrainOptions& opts) {
  CheckTrainable(train, hp, true);
  TrainReport report = RunEpochs(
      train, hp, opts, "bper-j",
      InitFactorParams(train.universe(), hp, opts.init_scale),
      [&](FactorParams& fp, Sampler& sampler) -> std::optional<double> {
        auto s = DrawJointSample(sampler);
        if (!s) return std::nullopt;
        return BperJStep(fp, *s, hp.gamma, hp.lambda, hp.alpha);
      });
  if (hp.alpha == 0.0) {
    report.notes.push_back(
        "alpha=0: explanation factors and biases received only L2 decay; "
        "item ranking reduces to BPR over (P, Q, b)");
  }
  return report;
}

TrainReport TrainCd(const InteractionStore& train, const Hyperparams& hp,
                    const TrainOptions& opts) {
  CheckTrainable(train, hp, false);
  return RunEpochs(train, hp, opts, "cd",
                   InitCDParams(train.universe(), hp, opts.init_scale),
                   [&](CDParams& cd, Sampler& sampler) -> std::optional<double> {
                     auto s = DrawTripleSample(sampler);
                     if (!s) return std::nullopt;
                     return CdStep(cd, *s, hp.gamma, hp.lambda);
                   });
}

TrainReport TrainPitf(const InteractionStore& train, const Hyperparams& hp,
                      const TrainOptions& opts) {
  CheckTrainable(train, hp, false);
  return RunEpochs(train, hp, opts, "pitf",
                   InitFactorParams(train.universe(), hp, opts.init_scale),
                   [&](FactorParams& fp, Sampler& sampler) -> std::optional<double> {
                     auto s = DrawTripleSample(sampler);
                     if (!s) return std::nullopt;
                     return PitfStep(fp, *s, hp.gamma, hp.lambda);
                   });
}

TrainReport TrainCdJ(const InteractionStore& train, const Hyperparams& hp,
                     const TrainOptions& opts) {
  CheckTrainable(train, hp, true);
  return RunEpochs(train, hp, opts, "cd-j",
                   InitCDParams(train.universe(), hp, opts.init_scale),
                   [&](CDParams& cd, Sampler& sampler) -> std::optional<double> {
                     auto s = DrawTripleJointSample(sampler);
                     if (!s) return std::nullopt;
                     return CdJStep(cd, *s, hp.gamma, hp.lambda, hp.alpha);
                   });
}

TrainReport TrainPitfJ(const InteractionStore& train, const Hyperparams& hp,
                       const TrainOptions& opts) {
  CheckTrainable(train, hp, true);
  return RunEpochs(train, hp, opts, "pitf-j",
                   InitFactorParams(train.universe(), hp, opts.init_scale),
                   [&](FactorParams& fp, Sampler& sampler) -> std::optional<double> {
                     auto s = DrawTripleJointSample(sampler);
                     if (!s) return std::nullopt;
                     return PitfJStep(fp, *s, hp.gamma, hp.lambda, hp.alpha);
                   });
}

TrainReport TrainBperPlus(const InteractionStore& train, const Hyperparams& hp,
                          EmbeddingTable emb, const TrainOptions& opts) {
  CheckTrainable(train, hp, false);
  if (emb.raw.rows() != train.num_explanations()) {
    throw TrainingError("embedding table has " +
                        std::to_string(emb.raw.rows()) + " rows for " +
                        std::to_string(train.num_explanations()) +
                        " explanations");
  }
  if (emb.weight.rows() == 0) InitProjection(emb, hp.d, hp.seed);
  if (emb.d() != hp.d || emb.weight.cols() != emb.emb_dim() ||
      emb.bias.size() != hp.d) {
    throw TrainingError("embedding projection does not map into d dimensions");
  }
  BperPlusParams init{InitFactorParams(train.universe(), hp, opts.init_scale),
                      std::move(emb)};
  const bool train_projection = opts.train_projection;
  const double projection_lambda =
      hp.lambda / static_cast<double>(train.triple_count());
  return RunEpochs(
      train, hp, opts, "bper+", std::move(init),
      [&](BperPlusParams& bp, Sampler& sampler) -> std::optional<double> {
        auto s = DrawExplanationSample(sampler);
        if (!s) return std::nullopt;
        return BperPlusStep(bp, *s, hp.gamma, hp.lambda, train_projection,
                            projection_lambda);
      });
}

}  // namespace bper
