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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hope/kv.hpp"
#include "hope/nn.hpp"

namespace hope {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using nn::Activation;

enum class OptimizerKind { AdamW, RmsProp };
enum class LossKind { CrossEntropy, BinaryCrossEntropy };

std::string_view to_string(OptimizerKind k) noexcept;
std::string_view to_string(LossKind k) noexcept;
OptimizerKind parse_optimizer(std::string_view text);
LossKind parse_loss(std::string_view text);

/// Model and optimization settings for one run. The backbone rows
/// (hidden_size, num_layers, num_attention_heads, intermediate_size) describe
/// the pretrained encoder and are checked against its metadata at build time.
struct HyperParams {
  std::string model_architecture;
  std::size_t hidden_size = 768;
  std::size_t num_layers = 12;
  std::size_t num_attention_heads = 12;
  std::size_t intermediate_size = 3072;
  double dropout_rate = 0.1;
  Activation activation = Activation::Gelu;
  std::size_t max_sequence_length = 514;
  std::size_t batch_size = 16;
  double learning_rate = 2e-5;
  OptimizerKind optimizer = OptimizerKind::AdamW;
  LossKind loss = LossKind::CrossEntropy;
  std::uint64_t seed = 42;
  std::size_t num_epochs = 5;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;

  /// Width of the classifier output: 2 logits for cross-entropy, a single
  /// sigmoid logit for binary cross-entropy.
  std::size_t num_outputs() const noexcept { return loss == LossKind::CrossEntropy ? 2 : 1; }

  KeyValueDoc to_key_value() const;
  /// Starts from `base` and applies every recognised key in `doc`; unknown
  /// keys are ignored so the same document can carry run settings.
  static HyperParams from_key_value(const KeyValueDoc& doc, HyperParams base);
  static HyperParams from_key_value(const KeyValueDoc& doc);

  /// Sets one field from text, e.g. ("learning_rate", "1e-3").
  void set(std::string_view key, std::string_view value);

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

/// The shipped presets: "german-xlmr", "english-roberta-base",
/// "german-roberta-large".
std::span<const std::string_view> preset_names() noexcept;
HyperParams preset(std::string_view name);

/// Reads a key-value file; a `preset = <name>` entry selects the base values.
HyperParams load_hyperparams(const std::filesystem::path& path);

}  // namespace hope
