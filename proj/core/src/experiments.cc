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

#include "bper/experiments.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "bper/eval.h"
#include "bper/io.h"
#include "bper/synthetic.h"

namespace bper {

namespace fs = std::filesystem;

namespace {

bool UsesMu(ModelKind kind) {
  return kind == ModelKind::kBper || kind == ModelKind::kBperPlus ||
         kind == ModelKind::kBperJ;
}

std::string HyperparamString(ModelKind kind, const Hyperparams& hp,
                             const ExperimentConfig& config) {
  if (kind == ModelKind::kRand) return "none";
  if (!IsTrained(kind)) return "k=" + std::to_string(config.neighbors_k);
  std::string s = "d=" + std::to_string(hp.d) +
                  ";gamma=" + FormatDouble(hp.gamma) +
                  ";lambda=" + FormatDouble(hp.lambda) +
                  ";epochs=" + std::to_string(hp.epochs);
  if (UsesMu(kind)) s += ";mu=" + FormatDouble(hp.mu);
  if (IsJoint(kind)) s += ";alpha=" + FormatDouble(hp.alpha);
  return s;
}

Hyperparams RepetitionHyperparams(const ExperimentConfig& config, int rep) {
  Hyperparams hp = config.hp;
  hp.seed = config.hp.seed + static_cast<std::uint64_t>(rep);
  return hp;
}

FitOptions MakeFitOptions(const ExperimentConfig& config,
                          const ExperimentData& data) {
  FitOptions opts;
  opts.train.init_scale = config.init_scale;
  opts.train.train_projection = config.train_projection;
  opts.neighbors_k = config.neighbors_k;
  if (data.embedding) opts.embedding = &*data.embedding;
  return opts;
}

void CheckModelData(ModelKind kind, const ExperimentData& data) {
  if (kind == ModelKind::kBperPlus && !data.embedding) {
    throw ConfigError("bper+ needs an embedding file (set embeddings)");
  }
}

void AddMetrics(std::vector<CsvRow>& rows, const CsvRow& base,
                const MetricsReport& report, const std::string& prefix = "") {
  static constexpr const char* kNames[] = {"ndcg", "precision", "recall",
                                           "f1"};
  const double values[] = {report.ndcg, report.precision, report.recall,
                           report.f1};
  for (int k = 0; k < 4; ++k) {
    CsvRow row = base;
    row.metric = prefix + kNames[k];
    row.value = values[k];
    rows.push_back(std::move(row));
  }
}

void Log(std::ostream* log, const std::string& line) {
  if (log) *log << line << '\n' << std::flush;
}

std::optional<std::string> HyperparamValue(std::string_view hp,
                                           std::string_view key) {
  std::size_t start = 0;
  while (start <= hp.size()) {
    auto semi = hp.find(';', start);
    auto piece = hp.substr(start, semi == std::string_view::npos
                                      ? std::string_view::npos
                                      : semi - start);
    auto eq = piece.find('=');
    if (eq != std::string_view::npos && piece.substr(0, eq) == key) {
      return std::string(piece.substr(eq + 1));
    }
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return std::nullopt;
}

std::string Repetition(int rep) { return std::to_string(rep); }

}  // namespace

std::string FormatValue(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string FormatCsv(const std::vector<CsvRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.dataset + ',' + r.model + ',' + r.repetition + ',' +
           r.hyperparams + ',' + r.metric + ',' + FormatValue(r.value) + '\n';
  }
  return out;
}

std::vector<CsvRow> ParseCsv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kCsvHeader) throw ReportError("unexpected CSV header");
      continue;
    }
    std::vector<std::string_view> f;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma == std::string_view::npos
                                         ? std::string_view::npos
                                         : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (f.size() != 6) {
      throw ReportError("CSV line " + std::to_string(line_no) +
                        ": expected 6 fields");
    }
    CsvRow row{std::string(f[0]), std::string(f[1]), std::string(f[2]),
               std::string(f[3]), std::string(f[4]), 0.0};
    auto [ptr, ec] =
        std::from_chars(f[5].data(), f[5].data() + f[5].size(), row.value);
    if (ec != std::errc() || ptr != f[5].data() + f[5].size()) {
      throw ReportError("CSV line " + std::to_string(line_no) +
                        ": bad value");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void WriteCsv(const std::string& path, const std::vector<CsvRow>& rows) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ReportError("cannot write " + path);
  out << FormatCsv(rows);
  if (!out) throw ReportError("write failed for " + path);
}

ExperimentData LoadExperimentData(const ExperimentConfig& config) {
  config.Validate();
  if (config.data.empty()) {
    SyntheticData syn = GenerateSynthetic(config.synthetic);
    EmbeddingTable table;
    table.raw = std::move(syn.embeddings.rows);
    table.tag = syn.embeddings.tag;
    return {std::move(syn.store), std::move(table), config.DatasetName()};
  }
  LoadedDataset loaded = LoadTriples(config.data, config.id_mode);
  ExperimentData data{std::move(loaded.store), std::nullopt,
                      config.DatasetName()};
  if (!config.embeddings.empty()) {
    data.embedding =
        LoadEmbeddingTable(config.embeddings, data.store.num_explanations());
  }
  return data;
}

void AppendMeans(std::vector<CsvRow>& rows) {
  struct Group {
    CsvRow first;
    double sum = 0.0;
    std::size_t count = 0;
  };
  std::vector<Group> groups;
  std::map<std::string, std::size_t> index;
  for (const auto& r : rows) {
    if (r.repetition == "mean") continue;
    std::string key = r.dataset + '\x1f' + r.model + '\x1f' + r.hyperparams +
                      '\x1f' + r.metric;
    auto [it, fresh] = index.emplace(key, groups.size());
    if (fresh) groups.push_back({r});
    groups[it->second].sum += r.value;
    ++groups[it->second].count;
  }
  for (const auto& g : groups) {
    CsvRow row = g.first;
    row.repetition = "mean";
    row.value = g.sum / static_cast<double>(g.count);
    rows.push_back(std::move(row));
  }
}

Hyperparams SelectHyperparams(ModelKind kind, const Split& split,
                              const ExperimentConfig& config,
                              const ExperimentData& data,
                              std::size_t* training_runs) {
  Hyperparams best = config.hp;
  if (!IsTrained(kind) || split.validation.empty()) return best;
  CheckModelData(kind, data);
  const FitOptions opts = MakeFitOptions(config, data);
  const EvalOptions eval{config.threads};
  std::vector<double> mus = {config.hp.mu};
  if (UsesMu(kind) && !config.mu_sweep.empty()) mus = config.mu_sweep;
  double best_f1 = -1.0;
  for (std::size_t d : config.d_grid) {
    for (double lambda : config.lambda_grid) {
      for (double gamma : config.gamma_grid) {
        for (std::size_t epochs : config.epochs_grid) {
          Hyperparams hp = config.hp;
          hp.d = d;
          hp.lambda = lambda;
          hp.gamma = gamma;
          hp.epochs = epochs;
          FittedModel model = Fit(kind, split.train, hp, opts);
          if (training_runs) ++*training_runs;
          for (double mu : mus) {
            auto scorer = model.ExplanationScorerFor(mu);
            double f1 = EvaluateExplanationRanking(*scorer, split.validation,
                                                   config.top_n, eval)
                            .f1;
            if (f1 > best_f1) {
              best_f1 = f1;
              best = hp;
              best.mu = mu;
            }
          }
        }
      }
    }
  }
  best.seed = config.hp.seed;
  return best;
}

ExperimentResult RunComparison(const ExperimentConfig& config,
                               const ExperimentData& data, std::ostream* log) {
  config.Validate();
  for (ModelKind kind : config.models) CheckModelData(kind, data);
  ExperimentResult result;
  const FitOptions opts = MakeFitOptions(config, data);
  const EvalOptions eval{config.threads};
  for (int rep = 0; rep < config.split.repetitions; ++rep) {
    Split split = SplitStore(data.store, config.split, rep);
    const InteractionStore train = split.FullTrain();
    for (ModelKind kind : config.models) {
      Hyperparams hp = RepetitionHyperparams(config, rep);
      if (config.tune && IsTrained(kind)) {
        hp = SelectHyperparams(kind, split, config, data);
        hp.seed = config.hp.seed + static_cast<std::uint64_t>(rep);
      }
      Log(log, "[compare] repetition " + std::to_string(rep) + " model " +
                   ModelName(kind));
      FittedModel model = Fit(kind, train, hp, opts);
      if (IsTrained(kind)) ++result.training_runs;
      MetricsReport report = EvaluateExplanationRanking(
          *model.ExplanationScorerFor(), split.test, config.top_n, eval);
      CsvRow base{data.name, ModelName(kind), Repetition(rep),
                  config.tune ? "tuned;" + HyperparamString(kind, hp, config)
                              : HyperparamString(kind, hp, config),
                  "", 0.0};
      AddMetrics(result.rows, base, report);
    }
  }
  if (config.tune) {
    // Tuned points differ per repetition; average per model instead.
    std::vector<CsvRow> copy = result.rows;
    for (auto& r : copy) r.hyperparams = "tuned";
    AppendMeans(copy);
    for (auto& r : copy) {
      if (r.repetition == "mean") result.rows.push_back(r);
    }
  } else {
    AppendMeans(result.rows);
  }
  return result;
}

ExperimentResult RunMuSweep(const ExperimentConfig& config,
                            const ExperimentData& data, std::ostream* log) {
  config.Validate();
  if (config.mu_sweep.empty()) throw ConfigError("mu_sweep is empty");
  ExperimentResult result;
  const FitOptions opts = MakeFitOptions(config, data);
  const EvalOptions eval{config.threads};
  for (int rep = 0; rep < config.split.repetitions; ++rep) {
    Split split = SplitStore(data.store, config.split, rep);
    const InteractionStore train = split.FullTrain();
    Hyperparams hp = RepetitionHyperparams(config, rep);
    Log(log, "[sweep-mu] repetition " + std::to_string(rep));
    FittedModel model = Fit(ModelKind::kBper, train, hp, opts);
    ++result.training_runs;
    for (double mu : config.mu_sweep) {
      Hyperparams shown = hp;
      shown.mu = mu;
      MetricsReport report = EvaluateExplanationRanking(
          *model.ExplanationScorerFor(mu), split.test, config.top_n, eval);
      CsvRow base{data.name, "bper", Repetition(rep),
                  HyperparamString(ModelKind::kBper, shown, config), "", 0.0};
      AddMetrics(result.rows, base, report);
    }
  }
  AppendMeans(result.rows);
  return result;
}

ExperimentResult RunAlphaSweep(const ExperimentConfig& config,
                               const ExperimentData& data, std::ostream* log) {
  config.Validate();
  if (config.alpha_sweep.empty()) throw ConfigError("alpha_sweep is empty");
  if (config.joint_models.empty()) throw ConfigError("joint_models is empty");
  ExperimentResult result;
  const FitOptions opts = MakeFitOptions(config, data);
  const EvalOptions eval{config.threads};
  for (int rep = 0; rep < config.split.repetitions; ++rep) {
    Split split = SplitStore(data.store, config.split, rep);
    const InteractionStore train = split.FullTrain();
    for (ModelKind joint : config.joint_models) {
      // Explanation reference: the same family learned without the item
      // task and evaluated on every test pair.
      const ModelKind base_kind = NonJointCounterpart(joint);
      Hyperparams hp = RepetitionHyperparams(config, rep);
      Log(log, "[sweep-alpha] repetition " + std::to_string(rep) + " model " +
                   ModelName(base_kind) + " (non-joint)");
      FittedModel base = Fit(base_kind, train, hp, opts);
      ++result.reference_runs;
      MetricsReport base_report = EvaluateExplanationRanking(
          *base.ExplanationScorerFor(), split.test, config.top_n, eval);
      AddMetrics(result.rows,
                 {data.name, ModelName(base_kind), Repetition(rep),
                  HyperparamString(base_kind, hp, config) + ";role=non-joint",
                  "", 0.0},
                 base_report, "exp_");

      for (double alpha : config.alpha_sweep) {
        hp.alpha = alpha;
        Log(log, "[sweep-alpha] repetition " + std::to_string(rep) +
                     " model " + ModelName(joint) + " alpha " +
                     FormatDouble(alpha));
        FittedModel model = Fit(joint, train, hp, opts);
        ++result.training_runs;
        JointReport report =
            EvaluateJoint(*model.ItemScorerFor(), *model.ExplanationScorerFor(),
                          train, split.test, config.top_m, config.top_n, eval);
        std::string hps = HyperparamString(joint, hp, config);
        if (alpha == 0.0) hps += ";role=reference";
        CsvRow base_row{data.name, ModelName(joint), Repetition(rep), hps, "",
                        0.0};
        AddMetrics(result.rows, base_row, report.recommendation, "rec_");
        if (!report.explanation.empty()) {
          AddMetrics(result.rows, base_row, report.explanation, "exp_");
        }
        CsvRow units = base_row;
        units.metric = "exp_units";
        units.value = static_cast<double>(report.explanation.unit_count);
        result.rows.push_back(units);
      }
    }
  }
  AppendMeans(result.rows);
  return result;
}

ExperimentResult RunSparsity(const ExperimentConfig& config,
                             const ExperimentData& data, std::ostream* log) {
  config.Validate();
  if (config.sparsity_ratios.empty()) {
    throw ConfigError("sparsity_ratios is empty");
  }
  for (ModelKind kind : config.sparsity_models) CheckModelData(kind, data);
  ExperimentResult result;
  const FitOptions opts = MakeFitOptions(config, data);
  const EvalOptions eval{config.threads};
  const std::size_t whole = data.store.triple_count();
  for (int rep = 0; rep < config.split.repetitions; ++rep) {
    Split split = SplitStore(data.store, config.split, rep);
    const InteractionStore full = split.FullTrain();
    for (double ratio : config.sparsity_ratios) {
      // At or beyond the split's own training share the untouched training
      // set is used, so that point coincides with the comparison run.
      const bool untouched = ratio >= config.split.train_fraction;
      InteractionStore train =
          untouched ? full
                    : SubsampleTraining(full, ratio, whole,
                                        config.split.seed +
                                            static_cast<std::uint64_t>(rep));
      for (ModelKind kind : config.sparsity_models) {
        Hyperparams hp = RepetitionHyperparams(config, rep);
        Log(log, "[sparsity] repetition " + std::to_string(rep) + " ratio " +
                     FormatDouble(ratio) + " model " + ModelName(kind));
        FittedModel model = Fit(kind, train, hp, opts);
        if (IsTrained(kind)) ++result.training_runs;
        MetricsReport report = EvaluateExplanationRanking(
            *model.ExplanationScorerFor(), split.test, config.top_n, eval);
        AddMetrics(result.rows,
                   {data.name, ModelName(kind), Repetition(rep),
                    "ratio=" + FormatDouble(ratio) + ";" +
                        HyperparamString(kind, hp, config),
                    "", 0.0},
                   report);
      }
    }
  }
  AppendMeans(result.rows);
  return result;
}

namespace {

std::vector<CsvRow> ReadCsvFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReportError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseCsv(buf.str());
}

template <typename T>
std::vector<T> Ordered(const std::vector<CsvRow>& rows,
                       T (*key)(const CsvRow&)) {
  std::vector<T> out;
  for (const auto& r : rows) {
    T k = key(r);
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  return out;
}

std::string DatasetOf(const CsvRow& r) { return r.dataset; }
std::string ModelOf(const CsvRow& r) { return r.model; }
std::string HpOf(const CsvRow& r) { return r.hyperparams; }

std::vector<CsvRow> MeanRows(const std::vector<CsvRow>& rows,
                             const std::string& dataset) {
  std::vector<CsvRow> out;
  for (const auto& r : rows) {
    if (r.repetition == "mean" && r.dataset == dataset) out.push_back(r);
  }
  return out;
}

std::string Cell(const std::vector<CsvRow>& rows, const std::string& model,
                 const std::string& hp, const std::string& metric) {
  for (const auto& r : rows) {
    if (r.model == model && r.hyperparams == hp && r.metric == metric) {
      return FormatValue(r.value);
    }
  }
  return "nan";
}

void WriteText(const fs::path& path, const std::string& text,
               std::vector<std::string>& written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ReportError("cannot write " + path.string());
  out << text;
  written.push_back(path.string());
}

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%9.3f", 100.0 * v);
  return buf;
}

}  // namespace

std::vector<std::string> WriteReport(const std::string& csv_dir) {
  const fs::path dir(csv_dir);
  if (!fs::is_directory(dir)) {
    throw ReportError("not a directory: " + csv_dir);
  }
  std::vector<std::string> written;
  std::ostringstream summary;
  bool any = false;

  if (fs::exists(dir / "comparison.csv")) {
    any = true;
    auto rows = ReadCsvFile(dir / "comparison.csv");
    for (const auto& ds : Ordered(rows, DatasetOf)) {
      auto mean = MeanRows(rows, ds);
      summary << "# " << ds << ": explanation ranking, mean over "
              << "repetitions (%)\n";
      summary << "model          NDCG       Pre       Rec        F1\n";
      for (const auto& model : Ordered(mean, ModelOf)) {
        std::string line = model;
        line.resize(std::max<std::size_t>(line.size(), 10), ' ');
        for (const char* metric : {"ndcg", "precision", "recall", "f1"}) {
          double v = std::numeric_limits<double>::quiet_NaN();
          for (const auto& r : mean) {
            if (r.model == model && r.metric == metric) v = r.value;
          }
          line += " " + Percent(v);
        }
        summary << line << '\n';
      }
      summary << '\n';
    }
  }

  if (fs::exists(dir / "mu_sweep.csv")) {
    any = true;
    auto rows = ReadCsvFile(dir / "mu_sweep.csv");
    for (const auto& ds : Ordered(rows, DatasetOf)) {
      auto mean = MeanRows(rows, ds);
      std::string text = "# mu ndcg precision recall f1\n";
      double best_f1 = -1.0;
      std::string best_mu;
      for (const auto& hp : Ordered(mean, HpOf)) {
        std::string mu = HyperparamValue(hp, "mu").value_or("nan");
        text += mu;
        for (const char* metric : {"ndcg", "precision", "recall", "f1"}) {
          text += " " + Cell(mean, "bper", hp, metric);
        }
        text += '\n';
        for (const auto& r : mean) {
          if (r.hyperparams == hp && r.metric == "f1" && r.value > best_f1) {
            best_f1 = r.value;
            best_mu = mu;
          }
        }
      }
      WriteText(dir / ("mu_curve_" + ds + ".dat"), text, written);
      summary << "# " << ds << ": mu sweep, best F1 " << FormatValue(best_f1)
              << " at mu=" << best_mu << "\n\n";
    }
  }

  if (fs::exists(dir / "alpha_sweep.csv")) {
    any = true;
    auto rows = ReadCsvFile(dir / "alpha_sweep.csv");
    static const char* kCols[] = {
        "rec_ndcg", "rec_precision", "rec_recall", "rec_f1",   "exp_ndcg",
        "exp_precision", "exp_recall", "exp_f1", "exp_units"};
    for (const auto& ds : Ordered(rows, DatasetOf)) {
      auto mean = MeanRows(rows, ds);
      for (const auto& model : Ordered(mean, ModelOf)) {
        std::vector<std::string> hps;
        for (const auto& hp : Ordered(mean, HpOf)) {
          bool mine = false;
          for (const auto& r : mean) mine |= r.model == model && r.hyperparams == hp;
          if (mine) hps.push_back(hp);
        }
        if (hps.empty() ||
            HyperparamValue(hps.front(), "role") == std::string("non-joint")) {
          continue;
        }
        std::string text = "# alpha";
        for (const char* c : kCols) text += std::string(" ") + c;
        text += '\n';
        for (const auto& hp : hps) {
          text += HyperparamValue(hp, "alpha").value_or("nan");
          for (const char* c : kCols) text += " " + Cell(mean, model, hp, c);
          text += '\n';
        }
        const std::string base_name =
            ModelName(NonJointCounterpart(*ParseModelKind(model)));
        for (const auto& r : mean) {
          if (r.model == base_name && r.metric == "exp_f1" &&
              HyperparamValue(r.hyperparams, "role") ==
                  std::string("non-joint")) {
            text += "# non-joint " + base_name +
                    " exp_f1 " + FormatValue(r.value) + '\n';
            summary << "# " << ds << ": " << model << " alpha sweep, "
                    << "non-joint " << base_name << " exp F1 "
                    << FormatValue(r.value) << '\n';
          }
        }
        WriteText(dir / ("alpha_curve_" + ds + "_" + model + ".dat"), text,
                  written);
      }
      summary << '\n';
    }
  }

  if (fs::exists(dir / "sparsity.csv")) {
    any = true;
    auto rows = ReadCsvFile(dir / "sparsity.csv");
    for (const auto& ds : Ordered(rows, DatasetOf)) {
      auto mean = MeanRows(rows, ds);
      auto models = Ordered(mean, ModelOf);
      std::vector<std::string> ratios;
      for (const auto& r : mean) {
        auto ratio = HyperparamValue(r.hyperparams, "ratio").value_or("nan");
        if (std::find(ratios.begin(), ratios.end(), ratio) == ratios.end()) {
          ratios.push_back(ratio);
        }
      }
      std::string text = "# ratio";
      for (const auto& m : models) {
        for (const char* metric : {"ndcg", "precision", "recall", "f1"}) {
          text += " " + m + "_" + metric;
        }
      }
      text += '\n';
      summary << "# " << ds << ": sparsity, F1 (%) by training ratio\n";
      summary << "ratio";
      for (const auto& m : models) summary << ' ' << m;
      summary << '\n';
      for (const auto& ratio : ratios) {
        text += ratio;
        summary << ratio;
        for (const auto& m : models) {
          for (const char* metric : {"ndcg", "precision", "recall", "f1"}) {
            std::string cell = "nan";
            for (const auto& r : mean) {
              if (r.model == m && r.metric == metric &&
                  HyperparamValue(r.hyperparams, "ratio") == ratio) {
                cell = FormatValue(r.value);
                if (std::string(metric) == "f1") {
                  summary << ' ' << Percent(r.value);
                }
              }
            }
            text += " " + cell;
          }
        }
        text += '\n';
        summary << '\n';
      }
      WriteText(dir / ("sparsity_curve_" + ds + ".dat"), text, written);
      summary << '\n';
    }
  }

  if (!any) throw ReportError("no result CSV files in " + csv_dir);
  WriteText(dir / "summary.txt", summary.str(), written);
  return written;
}

}  // namespace bper
