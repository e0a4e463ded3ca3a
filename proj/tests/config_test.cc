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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace bper {
namespace {

TEST(Config, DefaultsValidate) {
  ExperimentConfig c;
  EXPECT_NO_THROW(c.Validate());
  EXPECT_EQ(c.mu_sweep.size(), 11u);
  EXPECT_EQ(c.alpha_sweep.size(), 11u);
  EXPECT_EQ(c.sparsity_ratios, (std::vector<double>{0.3, 0.4, 0.5, 0.6, 0.7}));
  EXPECT_EQ(c.DatasetName(), "synthetic");
}

TEST(Config, SerializeParseRoundTrip) {
  ExperimentConfig c;
  c.data = "/tmp/x/amazon.tsv";
  c.id_mode = IdMode::kDense;
  c.models = {ModelKind::kBper, ModelKind::kCdJ};
  c.hp.gamma = 0.1 + 0.2;  // not a short decimal
  c.hp.seed = 123456789012345ull;
  c.mu_sweep = {0.25, 1.0 / 3.0};
  c.tune = true;
  c.synthetic.noise = 0.05;
  ExperimentConfig back = ParseConfig(SerializeConfig(c));
  EXPECT_EQ(back, c);
  EXPECT_EQ(SerializeConfig(back), SerializeConfig(c));
}

TEST(Config, EveryKeyRoundTripsThroughGetSet) {
  ExperimentConfig c;
  for (const auto& key : ExperimentConfig::Keys()) {
    ExperimentConfig d;
    d.Set(key, c.Get(key));
    EXPECT_EQ(d.Get(key), c.Get(key)) << key;
  }
  EXPECT_EQ(ExperimentConfig::Keys().front(), "data");
}

TEST(Config, CommentsAndWhitespace) {
  auto c = ParseConfig("# header\n  d = 7   # trailing\n\nmodels = bper , pitf\n");
  EXPECT_EQ(c.hp.d, 7u);
  EXPECT_EQ(c.models, (std::vector<ModelKind>{ModelKind::kBper, ModelKind::kPitf}));
}

TEST(Config, ErrorsNameTheLine) {
  auto expect_line = [](const char* text, const char* needle) {
    try {
      ParseConfig(text);
      FAIL() << text;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_line("d = 3\nbogus = 1\n", "line 2");
  expect_line("d = three\n", "line 1");
  expect_line("\n\nmodels = bper,nope\n", "line 3");
  expect_line("gamma\n", "line 1");
  expect_line("tune = maybe\n", "line 1");
  expect_line("d = -4\n", "line 1");
}

TEST(Config, ValidateCatchesBrokenInvariants) {
  auto bad = [](auto edit) {
    ExperimentConfig c;
    edit(c);
    EXPECT_THROW(c.Validate(), ConfigError);
  };
  bad([](ExperimentConfig& c) { c.models.clear(); });
  bad([](ExperimentConfig& c) { c.joint_models = {ModelKind::kBper}; });
  bad([](ExperimentConfig& c) { c.sparsity_models = {ModelKind::kBperJ}; });
  bad([](ExperimentConfig& c) { c.mu_sweep = {1.2}; });
  bad([](ExperimentConfig& c) { c.sparsity_ratios = {0.0}; });
  bad([](ExperimentConfig& c) { c.hp.gamma = 0.0; });
  bad([](ExperimentConfig& c) { c.split.repetitions = 0; });
  bad([](ExperimentConfig& c) { c.top_n = 0; });
  bad([](ExperimentConfig& c) { c.synthetic.noise = 1.0; });
  bad([](ExperimentConfig& c) {
    c.tune = true;
    c.d_grid.clear();
  });
}

TEST(Config, DatasetNameFromStem) {
  ExperimentConfig c;
  c.data = "/data/trip,advisor.tsv";
  EXPECT_EQ(c.DatasetName(), "trip_advisor");
  c.dataset_name = "yelp";
  EXPECT_EQ(c.DatasetName(), "yelp");
}

TEST(FormatDouble, ShortestRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456.0, 0.7}) {
    EXPECT_EQ(std::stod(FormatDouble(x)), x);
  }
  EXPECT_EQ(FormatDouble(0.7), "0.7");
}

}  // namespace
}  // namespace bper
