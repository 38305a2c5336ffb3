// Copyright 2026 The hopeclf Authors
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

#include <doctest.h>

#include "hope/fileio.hpp"
#include "hope/hyperparams.hpp"
#include "test_support.hpp"

using namespace hope;

TEST_CASE("presets carry the published hyperparameter columns") {
  const auto x = preset("german-xlmr");
  CHECK(x.model_architecture == "XLM-RoBERTa");
  CHECK(x.hidden_size == 768);
  CHECK(x.num_layers == 12);
  CHECK(x.num_attention_heads == 12);
  CHECK(x.intermediate_size == 3072);
  CHECK(x.dropout_rate == 0.2);
  CHECK(x.activation == Activation::Relu);
  CHECK(x.max_sequence_length == 514);
  CHECK(x.batch_size == 16);
  CHECK(x.learning_rate == 1e-5);
  CHECK(x.optimizer == OptimizerKind::AdamW);
  CHECK(x.loss == LossKind::CrossEntropy);

  const auto e = preset("english-roberta-base");
  CHECK(e.model_architecture == "RoBERTa-Base");
  CHECK(e.num_layers == 12);
  CHECK(e.num_attention_heads == 12);
  CHECK(e.dropout_rate == 0.1);
  CHECK(e.activation == Activation::Gelu);
  CHECK(e.batch_size == 16);
  CHECK(e.learning_rate == 2e-5);
  CHECK(e.optimizer == OptimizerKind::AdamW);
  CHECK(e.loss == LossKind::CrossEntropy);
  CHECK(e.num_outputs() == 2);

  const auto l = preset("german-roberta-large");
  CHECK(l.model_architecture == "RoBERTa-Large");
  CHECK(l.hidden_size == 768);
  CHECK(l.num_layers == 14);
  CHECK(l.num_attention_heads == 16);
  CHECK(l.intermediate_size == 3072);
  CHECK(l.dropout_rate == 0.1);
  CHECK(l.activation == Activation::Gelu);
  CHECK(l.batch_size == 8);
  CHECK(l.learning_rate == 4e-5);
  CHECK(l.optimizer == OptimizerKind::RmsProp);
  CHECK(l.loss == LossKind::BinaryCrossEntropy);
  CHECK(l.num_outputs() == 1);

  for (auto name : preset_names()) {
    CHECK(preset(name).seed == 42);
    CHECK_NOTHROW(preset(name).validate());
  }
  CHECK_THROWS_AS(preset("roberta-huge"), ConfigError);
}

TEST_CASE("shipped preset files load to the built-in presets") {
  for (auto name : preset_names()) {
    CAPTURE(name);
    const auto path = std::filesystem::path(HOPE_PRESET_DIR) / (std::string(name) + ".conf");
    CHECK(load_hyperparams(path) == preset(name));
  }
}

TEST_CASE("validation enforces the parameter invariants") {
  auto p = preset("english-roberta-base");
  p.hidden_size = 770;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = preset("english-roberta-base");
  p.dropout_rate = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.dropout_rate = -0.1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = preset("english-roberta-base");
  p.learning_rate = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = preset("english-roberta-base");
  p.batch_size = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = preset("english-roberta-base");
  p.num_epochs = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("key-value round trip and overrides") {
  const auto p = preset("german-roberta-large");
  CHECK(HyperParams::from_key_value(p.to_key_value()) == p);
  auto q = p;
  q.set("learning_rate", "1e-3");
  q.set("activation", "RELU");
  q.set("optimizer", "AdamW");
  q.set("loss", "CrossEntropy");
  CHECK(q.learning_rate == 1e-3);
  CHECK(q.activation == Activation::Relu);
  CHECK(q.num_outputs() == 2);
  CHECK_THROWS_AS(q.set("hidden_sise", "4"), ConfigError);
  CHECK_THROWS_AS(q.set("batch_size", "many"), ConfigError);
  CHECK_THROWS_AS(q.set("optimizer", "SGD"), ConfigError);
}

TEST_CASE("a preset key selects the base of a config file") {
  test::TempDir dir;
  atomic_write(dir / "run.conf", "preset = german-xlmr\nbatch_size = 4\n");
  const auto p = load_hyperparams(dir / "run.conf");
  CHECK(p.batch_size == 4);
  CHECK(p.dropout_rate == 0.2);
  atomic_write(dir / "bad.conf", "preset = german-xlmr\nhidden_size = 770\n");
  CHECK_THROWS_AS(load_hyperparams(dir / "bad.conf"), ConfigError);
}
