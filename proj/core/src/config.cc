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

#include "bper/config.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>

namespace bper {

namespace {

std::string_view Trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

[[noreturn]] void Bad(std::string_view value, std::string_view what) {
  throw ConfigError("invalid " + std::string(what) + " '" +
                    std::string(value) + "'");
}

template <typename T>
T ParseNumber(std::string_view s, std::string_view what) {
  s = Trim(s);
  T out{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    Bad(s, what);
  }
  return out;
}

void Parse(std::string_view s, std::string& out) { out = std::string(s); }
void Parse(std::string_view s, double& out) {
  out = ParseNumber<double>(s, "number");
}
void Parse(std::string_view s, std::size_t& out) {
  out = ParseNumber<std::size_t>(s, "count");
}
void Parse(std::string_view s, int& out) {
  out = ParseNumber<int>(s, "integer");
}
void Parse(std::string_view s, bool& out) {
  if (s == "true" || s == "1" || s == "yes") {
    out = true;
  } else if (s == "false" || s == "0" || s == "no") {
    out = false;
  } else {
    Bad(s, "boolean");
  }
}
void Parse(std::string_view s, IdMode& out) {
  if (s == "raw") {
    out = IdMode::kRawStrings;
  } else if (s == "dense") {
    out = IdMode::kDense;
  } else {
    Bad(s, "id mode");
  }
}
void Parse(std::string_view s, ModelKind& out) {
  auto kind = ParseModelKind(Trim(s));
  if (!kind) Bad(s, "model name");
  out = *kind;
}

template <typename T>
void Parse(std::string_view s, std::vector<T>& out) {
  out.clear();
  if (Trim(s).empty()) return;
  std::size_t start = 0;
  while (true) {
    auto comma = s.find(',', start);
    auto piece = Trim(s.substr(start, comma == std::string_view::npos
                                          ? std::string_view::npos
                                          : comma - start));
    T value{};
    Parse(piece, value);
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
}

std::string Format(const std::string& v) { return v; }
std::string Format(double v) { return FormatDouble(v); }
std::string Format(std::size_t v) { return std::to_string(v); }
std::string Format(int v) { return std::to_string(v); }
std::string Format(bool v) { return v ? "true" : "false"; }
std::string Format(IdMode v) {
  return v == IdMode::kDense ? "dense" : "raw";
}
std::string Format(ModelKind v) { return ModelName(v); }

template <typename T>
std::string Format(const std::vector<T>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ",";
    out += Format(v[k]);
  }
  return out;
}

struct Field {
  std::string key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename Ref>
Field MakeField(std::string key, Ref ref) {
  return {std::move(key),
          [ref](ExperimentConfig& c, std::string_view v) { Parse(v, ref(c)); },
          [ref](const ExperimentConfig& c) {
            return Format(ref(const_cast<ExperimentConfig&>(c)));
          }};
}

#define BPER_FIELD(key, member) \
  MakeField(key, [](ExperimentConfig& c) -> auto& { return c.member; })

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      BPER_FIELD("data", data),
      BPER_FIELD("id_mode", id_mode),
      BPER_FIELD("embeddings", embeddings),
      BPER_FIELD("dataset_name", dataset_name),
      BPER_FIELD("output_dir", output_dir),
      BPER_FIELD("models", models),
      BPER_FIELD("joint_models", joint_models),
      BPER_FIELD("sparsity_models", sparsity_models),
      BPER_FIELD("d", hp.d),
      BPER_FIELD("gamma", hp.gamma),
      BPER_FIELD("lambda", hp.lambda),
      BPER_FIELD("epochs", hp.epochs),
      BPER_FIELD("mu", hp.mu),
      BPER_FIELD("alpha", hp.alpha),
      BPER_FIELD("seed", hp.seed),
      BPER_FIELD("init_scale", init_scale),
      BPER_FIELD("train_projection", train_projection),
      BPER_FIELD("train_fraction", split.train_fraction),
      BPER_FIELD("validation_fraction", split.validation_fraction),
      BPER_FIELD("repetitions", split.repetitions),
      BPER_FIELD("split_seed", split.seed),
      BPER_FIELD("mu_sweep", mu_sweep),
      BPER_FIELD("alpha_sweep", alpha_sweep),
      BPER_FIELD("sparsity_ratios", sparsity_ratios),
      BPER_FIELD("top_n", top_n),
      BPER_FIELD("top_m", top_m),
      BPER_FIELD("neighbors_k", neighbors_k),
      BPER_FIELD("threads", threads),
      BPER_FIELD("tune", tune),
      BPER_FIELD("d_grid", d_grid),
      BPER_FIELD("lambda_grid", lambda_grid),
      BPER_FIELD("gamma_grid", gamma_grid),
      BPER_FIELD("epochs_grid", epochs_grid),
      BPER_FIELD("synth_users", synthetic.num_users),
      BPER_FIELD("synth_items", synthetic.num_items),
      BPER_FIELD("synth_explanations", synthetic.num_explanations),
      BPER_FIELD("synth_dim", synthetic.d_true),
      BPER_FIELD("synth_records_per_user", synthetic.records_per_user),
      BPER_FIELD("synth_explanations_per_record",
                 synthetic.explanations_per_record),
      BPER_FIELD("synth_noise", synthetic.noise),
      BPER_FIELD("synth_mu", synthetic.mu_true),
      BPER_FIELD("synth_user_signal", synthetic.user_signal),
      BPER_FIELD("synth_bias_scale", synthetic.bias_scale),
      BPER_FIELD("synth_item_temperature", synthetic.item_temperature),
      BPER_FIELD("synth_embedding_dim", synthetic.embedding_dim),
      BPER_FIELD("synth_embedding_noise", synthetic.embedding_noise),
      BPER_FIELD("synth_seed", synthetic.seed),
  };
  return fields;
}

#undef BPER_FIELD

const Field& FindField(std::string_view key) {
  for (const auto& f : Fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::vector<double> Grid(int lo, int hi) {
  std::vector<double> out;
  for (int k = lo; k <= hi; ++k) out.push_back(k / 10.0);
  return out;
}

void CheckRange(const std::vector<double>& values, double lo, double hi,
                bool open_lo, const std::string& name) {
  for (double v : values) {
    bool ok = (open_lo ? v > lo : v >= lo) && v <= hi;
    if (!ok) {
      throw ConfigError(name + " value " + FormatDouble(v) + " out of range");
    }
  }
}

}  // namespace

std::string FormatDouble(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

ExperimentConfig::ExperimentConfig()
    : mu_sweep(Grid(0, 10)),
      alpha_sweep(Grid(0, 10)),
      sparsity_ratios(Grid(3, 7)) {}

void ExperimentConfig::Set(std::string_view key, std::string_view value) {
  FindField(Trim(key)).set(*this, Trim(value));
}

std::string ExperimentConfig::Get(std::string_view key) const {
  return FindField(key).get(*this);
}

const std::vector<std::string>& ExperimentConfig::Keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& f : Fields()) out.push_back(f.key);
    return out;
  }();
  return keys;
}

void ExperimentConfig::Validate() const {
  try {
    hp.Validate();
    split.Validate();
    if (data.empty()) synthetic.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (models.empty()) throw ConfigError("models must not be empty");
  for (ModelKind k : joint_models) {
    if (!IsJoint(k)) {
      throw ConfigError("joint_models lists non-joint model " + ModelName(k));
    }
  }
  for (ModelKind k : sparsity_models) {
    if (IsJoint(k)) {
      throw ConfigError("sparsity_models lists joint model " + ModelName(k));
    }
  }
  CheckRange(mu_sweep, 0.0, 1.0, false, "mu_sweep");
  CheckRange(alpha_sweep, 0.0, 1.0, false, "alpha_sweep");
  CheckRange(sparsity_ratios, 0.0, 1.0, true, "sparsity_ratios");
  if (!(init_scale >= 0.0)) throw ConfigError("init_scale must be >= 0");
  if (top_n < 1 || top_m < 1) throw ConfigError("cutoffs must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (tune && (d_grid.empty() || lambda_grid.empty() || gamma_grid.empty() ||
               epochs_grid.empty())) {
    throw ConfigError("tuning grids must not be empty");
  }
}

std::string ExperimentConfig::DatasetName() const {
  std::string name = dataset_name;
  if (name.empty()) {
    name = data.empty() ? "synthetic"
                        : std::filesystem::path(data).stem().string();
  }
  std::replace(name.begin(), name.end(), ',', '_');
  return name;
}

ExperimentConfig ParseConfig(std::string_view text) {
  ExperimentConfig config;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    try {
      config.Set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str());
}

std::string SerializeConfig(const ExperimentConfig& config) {
  std::string out;
  for (const auto& f : Fields()) {
    out += f.key + " = " + f.get(config) + "\n";
  }
  return out;
}

}  // namespace bper
