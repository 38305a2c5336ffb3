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

#include "hope/hyperparams.hpp"

#include <array>
#include <cctype>
#include <cmath>

namespace hope {

std::string_view to_string(OptimizerKind k) noexcept {
  return k == OptimizerKind::AdamW ? "AdamW" : "RMSProp";
}

std::string_view to_string(LossKind k) noexcept {
  return k == LossKind::CrossEntropy ? "CrossEntropy" : "BinaryCrossEntropy";
}

namespace {

std::string folded(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '-' || c == '_' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::size_t parse_count(std::string_view text, std::string_view key) {
  const long long v = parse_int(text, key);
  if (v < 0) throw ConfigError(std::string(key) + " must be non-negative");
  return static_cast<std::size_t>(v);
}

}  // namespace

OptimizerKind parse_optimizer(std::string_view text) {
  const auto f = folded(text);
  if (f == "adamw") return OptimizerKind::AdamW;
  if (f == "rmsprop") return OptimizerKind::RmsProp;
  throw ConfigError("unknown optimizer '" + std::string(text) + "' (AdamW or RMSProp)");
}

LossKind parse_loss(std::string_view text) {
  const auto f = folded(text);
  if (f == "crossentropy" || f == "crossentropyloss") return LossKind::CrossEntropy;
  if (f == "binarycrossentropy" || f == "bce" || f == "bceloss") return LossKind::BinaryCrossEntropy;
  throw ConfigError("unknown loss '" + std::string(text) +
                    "' (CrossEntropy or BinaryCrossEntropy)");
}

void HyperParams::validate() const {
  if (hidden_size == 0) throw ConfigError("hidden_size must be positive");
  if (num_attention_heads == 0) throw ConfigError("num_attention_heads must be positive");
  if (hidden_size % num_attention_heads != 0) {
    throw ConfigError("hidden_size " + std::to_string(hidden_size) +
                      " is not divisible by num_attention_heads " +
                      std::to_string(num_attention_heads));
  }
  if (num_layers == 0) throw ConfigError("num_layers must be positive");
  if (intermediate_size == 0) throw ConfigError("intermediate_size must be positive");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw ConfigError("dropout_rate must be in [0, 1), got " + format_double(dropout_rate));
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be positive, got " + format_double(learning_rate));
  }
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (num_epochs < 1) throw ConfigError("num_epochs must be at least 1");
  if (max_sequence_length < 2) throw ConfigError("max_sequence_length must be at least 2");
}

KeyValueDoc HyperParams::to_key_value() const {
  KeyValueDoc doc;
  doc.set("model_architecture", model_architecture);
  doc.set("hidden_size", hidden_size);
  doc.set("num_layers", num_layers);
  doc.set("num_attention_heads", num_attention_heads);
  doc.set("intermediate_size", intermediate_size);
  doc.set("dropout_rate", dropout_rate);
  doc.set("activation", to_string(activation));
  doc.set("max_sequence_length", max_sequence_length);
  doc.set("batch_size", batch_size);
  doc.set("learning_rate", learning_rate);
  doc.set("optimizer", to_string(optimizer));
  doc.set("loss", to_string(loss));
  doc.set("seed", std::to_string(seed));
  doc.set("num_epochs", num_epochs);
  return doc;
}

void HyperParams::set(std::string_view key, std::string_view value) {
  value = trim(value);
  try {
    if (key == "model_architecture") {
      model_architecture = std::string(value);
    } else if (key == "hidden_size") {
      hidden_size = parse_count(value, key);
    } else if (key == "num_layers") {
      num_layers = parse_count(value, key);
    } else if (key == "num_attention_heads") {
      num_attention_heads = parse_count(value, key);
    } else if (key == "intermediate_size") {
      intermediate_size = parse_count(value, key);
    } else if (key == "dropout_rate") {
      dropout_rate = parse_double(value, key);
    } else if (key == "activation") {
      activation = nn::parse_activation(value);
    } else if (key == "max_sequence_length") {
      max_sequence_length = parse_count(value, key);
    } else if (key == "batch_size") {
      batch_size = parse_count(value, key);
    } else if (key == "learning_rate") {
      learning_rate = parse_double(value, key);
    } else if (key == "optimizer") {
      optimizer = parse_optimizer(value);
    } else if (key == "loss") {
      loss = parse_loss(value);
    } else if (key == "seed") {
      seed = static_cast<std::uint64_t>(parse_int(value, key));
    } else if (key == "num_epochs") {
      num_epochs = parse_count(value, key);
    } else {
      throw ConfigError("unknown hyperparameter '" + std::string(key) + "'");
    }
  } catch (const KeyValueError& e) {
    throw ConfigError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

HyperParams HyperParams::from_key_value(const KeyValueDoc& doc) {
  return from_key_value(doc, HyperParams{});
}

HyperParams HyperParams::from_key_value(const KeyValueDoc& doc, HyperParams base) {
  static constexpr std::array<std::string_view, 14> kKeys{
      "model_architecture", "hidden_size",  "num_layers", "num_attention_heads",
      "intermediate_size",  "dropout_rate", "activation", "max_sequence_length",
      "batch_size",         "learning_rate", "optimizer", "loss",
      "seed",               "num_epochs"};
  for (auto key : kKeys) {
    if (auto v = doc.find(key)) base.set(key, *v);
  }
  return base;
}

namespace {

constexpr std::array<std::string_view, 3> kPresetNames{"german-xlmr", "english-roberta-base",
                                                      "german-roberta-large"};

}  // namespace

std::span<const std::string_view> preset_names() noexcept { return kPresetNames; }

HyperParams preset(std::string_view name) {
  HyperParams p;
  p.hidden_size = 768;
  p.intermediate_size = 3072;
  p.max_sequence_length = 514;
  p.seed = 42;
  p.num_epochs = 5;
  if (name == "german-xlmr") {
    p.model_architecture = "XLM-RoBERTa";
    p.num_layers = 12;
    p.num_attention_heads = 12;
    p.dropout_rate = 0.2;
    p.activation = Activation::Relu;
    p.batch_size = 16;
    p.learning_rate = 1e-5;
    p.optimizer = OptimizerKind::AdamW;
    p.loss = LossKind::CrossEntropy;
  } else if (name == "english-roberta-base") {
    p.model_architecture = "RoBERTa-Base";
    p.num_layers = 12;
    p.num_attention_heads = 12;
    p.dropout_rate = 0.1;
    p.activation = Activation::Gelu;
    p.batch_size = 16;
    p.learning_rate = 2e-5;
    p.optimizer = OptimizerKind::AdamW;
    p.loss = LossKind::CrossEntropy;
  } else if (name == "german-roberta-large") {
    // 768 wide with 14 layers / 16 heads, unlike the common large encoder
    // (1024 / 24 / 16). Backbone validation reports the mismatch.
    p.model_architecture = "RoBERTa-Large";
    p.num_layers = 14;
    p.num_attention_heads = 16;
    p.dropout_rate = 0.1;
    p.activation = Activation::Gelu;
    p.batch_size = 8;
    p.learning_rate = 4e-5;
    p.optimizer = OptimizerKind::RmsProp;
    p.loss = LossKind::BinaryCrossEntropy;
  } else {
    std::string known;
    for (auto n : kPresetNames) known += (known.empty() ? "" : ", ") + std::string(n);
    throw ConfigError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
  }
  return p;
}

HyperParams load_hyperparams(const std::filesystem::path& path) {
  const KeyValueDoc doc = KeyValueDoc::load(path);
  HyperParams base;
  if (auto name = doc.find("preset")) base = preset(*name);
  HyperParams p = HyperParams::from_key_value(doc, base);
  p.validate();
  return p;
}

}  // namespace hope
