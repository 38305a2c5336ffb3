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

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hope/backbone.hpp"
#include "hope/corpus.hpp"
#include "hope/encoding.hpp"
#include "hope/hyperparams.hpp"
#include "hope/nn.hpp"

namespace hope {

/// Raw class scores, one row per instance. Width 2 (index 0 = NotHope,
/// 1 = Hope) for the softmax head, width 1 (the Hope logit) for the sigmoid
/// head.
struct ClassifierOutput {
  std::size_t rows = 0;
  std::size_t width = 2;
  std::vector<double> logits;

  std::span<const double> row(std::size_t i) const {
    return {logits.data() + i * width, width};
  }

  friend bool operator==(const ClassifierOutput&, const ClassifierOutput&) = default;
};

class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(std::size_t index, const std::string& what)
      : std::runtime_error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Per-instance (P(NotHope), P(Hope)). Softmax over two logits, or
/// (1 - sigmoid(z), sigmoid(z)) for the single-logit head.
std::vector<std::array<double, 2>> probabilities(const ClassifierOutput& out);

/// Argmax with exact ties going to NotHope; for the sigmoid head, Hope iff
/// the logit is strictly positive.
std::vector<Label> predict(const ClassifierOutput& out);

/// dropout -> dense(hidden, hidden) -> activation -> dense(hidden, outputs).
template <typename T>
class ClassificationHead {
 public:
  struct Cache {
    nn::Matrix<T> input;
    nn::Matrix<T> dropped;
    nn::Matrix<T> mask;  // empty when dropout was not applied
    nn::Matrix<T> pre;
    nn::Matrix<T> act;
  };

  ClassificationHead(std::size_t hidden, std::size_t outputs, Activation act, double dropout);

  /// Dropout is applied only when `dropout_rng` is non-null.
  nn::Matrix<T> forward(const nn::Matrix<T>& pooled, nn::Rng* dropout_rng, Cache* cache) const;
  /// Returns dL/dpooled.
  nn::Matrix<T> backward(const Cache& cache, const nn::Matrix<T>& d_logits);

  void init(nn::Rng& rng, double stddev = 0.02);
  void visit(const std::string& prefix, const ParameterVisitor<T>& fn);

  nn::Linear<T> dense;
  nn::Linear<T> out_proj;
  Activation activation;
  double dropout_rate;
};

/// Where backbone weights come from: a pretrained model directory
/// (config.json + model.safetensors) or a seeded random toy encoder.
struct BackboneSource {
  enum class Kind { Pretrained, Toy };

  Kind kind = Kind::Toy;
  std::filesystem::path directory;
  std::size_t toy_vocab_size = 0;
  std::size_t toy_max_positions = 130;

  static BackboneSource pretrained(std::filesystem::path dir) {
    return {Kind::Pretrained, std::move(dir), 0, 0};
  }
  static BackboneSource toy(std::size_t vocab_size, std::size_t max_positions = 130) {
    return {Kind::Toy, {}, vocab_size, max_positions};
  }
};

/// Encoder backbone, first-token pooling, and a classification head.
///
/// Exclusively owned while training. After training, infer() is const and
/// may be called concurrently.
template <typename T>
class SequenceClassifier {
 public:
  struct TrainingPass {
    TokenBatch batch;
    typename Backbone<T>::Cache backbone;
    typename ClassificationHead<T>::Cache head;
    nn::Matrix<T> logits;
  };

  /// Throws ConfigError for invalid params and ModelError when the params
  /// disagree with the backbone metadata.
  SequenceClassifier(const HyperParams& params, const BackboneConfig& backbone);

  const HyperParams& params() const noexcept { return params_; }
  const BackboneConfig& backbone_config() const noexcept { return backbone_.config(); }

  /// Token budget per instance: the configured maximum capped by the
  /// backbone's position table.
  std::size_t max_input_length() const noexcept;

  /// With train_mode off this equals infer(). With it on, head dropout draws
  /// from the model's seeded dropout stream.
  ClassifierOutput forward(std::span<const Encoding> batch, bool train_mode);
  ClassifierOutput infer(std::span<const Encoding> batch) const;

  TrainingPass forward_train(std::span<const Encoding> batch, bool apply_dropout);
  /// Accumulates gradients. With `update_backbone` off the backbone is
  /// treated as frozen and only head gradients are produced.
  void backward(const TrainingPass& pass, const nn::Matrix<T>& d_logits, bool update_backbone);

  void zero_grad();
  /// Names: "roberta.<backbone name>" and "classifier.dense.*" /
  /// "classifier.out_proj.*".
  void visit_parameters(const ParameterVisitor<T>& fn);

  void init_head(std::uint64_t seed);
  void reset_dropout_stream(std::uint64_t seed);

  Backbone<T>& backbone() noexcept { return backbone_; }
  ClassificationHead<T>& head() noexcept { return head_; }

  static ClassifierOutput to_output(const nn::Matrix<T>& logits);

 private:
  nn::Matrix<T> pool(const TokenBatch& batch, const nn::Matrix<T>& hidden) const;

  HyperParams params_;
  Backbone<T> backbone_;
  ClassificationHead<T> head_;
  nn::Rng dropout_rng_;
};

/// Backbone weights come from `source`; the head is freshly initialised from
/// params.seed, so equal seeds give bitwise-equal heads.
template <typename T>
std::unique_ptr<SequenceClassifier<T>> build_model(const HyperParams& params,
                                                   const BackboneSource& source);

/// Loads every backbone tensor from a safetensors file. Accepts bare names
/// and names under a "roberta." prefix.
template <typename T>
void load_backbone_weights(Backbone<T>& backbone, const std::filesystem::path& safetensors);

}  // namespace hope
