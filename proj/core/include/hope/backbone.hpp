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
#include <filesystem>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hope/encoding.hpp"
#include "hope/hyperparams.hpp"
#include "hope/kv.hpp"
#include "hope/nn.hpp"

namespace hope {

class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Encoder metadata, as found in a pretrained model's config.json.
struct BackboneConfig {
  std::string architecture = "roberta";
  std::size_t vocab_size = 0;
  std::size_t hidden_size = 0;
  std::size_t num_layers = 0;
  std::size_t num_attention_heads = 0;
  std::size_t intermediate_size = 0;
  std::size_t max_position_embeddings = 514;
  std::size_t type_vocab_size = 1;
  TokenId pad_token_id = 1;
  double layer_norm_eps = 1e-5;
  Activation hidden_act = Activation::Gelu;

  /// Real tokens are numbered from pad_token_id + 1 in the position table.
  std::size_t position_offset() const noexcept {
    return static_cast<std::size_t>(pad_token_id) + 1;
  }
  /// Longest sequence (including sentinels) the position table can index.
  std::size_t position_capacity() const noexcept {
    return max_position_embeddings > position_offset() ? max_position_embeddings - position_offset()
                                                       : 0;
  }

  void validate() const;

  static BackboneConfig from_config_json(const std::filesystem::path& path);
  KeyValueDoc to_key_value(std::string_view prefix) const;
  static BackboneConfig from_key_value(const KeyValueDoc& doc, std::string_view prefix);

  /// Small randomly initialised encoder whose dimensions come from `params`.
  static BackboneConfig toy(const HyperParams& params, std::size_t vocab_size,
                            std::size_t max_positions = 130);

  friend bool operator==(const BackboneConfig&, const BackboneConfig&) = default;
};

/// Every mismatch between the configured backbone rows and the metadata.
/// Empty when consistent.
std::vector<std::string> backbone_mismatches(const HyperParams& params, const BackboneConfig& cfg);

/// Padded batch flattened row-major: token (b, i) lives at b * seq_len + i.
struct TokenBatch {
  std::size_t rows = 0;
  std::size_t seq_len = 0;
  std::vector<TokenId> ids;
  std::vector<std::uint8_t> mask;

  /// Requires equal id/mask lengths within each encoding and a common padded
  /// length across the batch.
  static TokenBatch from_encodings(std::span<const Encoding> batch);
};

template <typename T>
using ParameterVisitor = std::function<void(const std::string& name, nn::Parameter<T>& p)>;

template <typename T>
class Embeddings {
 public:
  Embeddings() = default;
  explicit Embeddings(const BackboneConfig& cfg);

  nn::Matrix<T> forward(const TokenBatch& batch, std::vector<std::size_t>* positions,
                        nn::Matrix<T>* pre_norm) const;
  void backward(const TokenBatch& batch, const std::vector<std::size_t>& positions,
                const nn::Matrix<T>& pre_norm, const nn::Matrix<T>& dy);

  void visit(const std::string& prefix, const ParameterVisitor<T>& fn);

  nn::Parameter<T> word;
  nn::Parameter<T> position;
  nn::Parameter<T> token_type;
  nn::LayerNorm<T> norm;
  TokenId pad_token_id = 1;
  std::size_t position_offset = 2;
};

/// Multi-head scaled dot-product self-attention; masked keys receive zero
/// weight.
template <typename T>
class SelfAttention {
 public:
  struct Cache {
    nn::Matrix<T> q, k, v;
    std::vector<nn::Matrix<T>> probs;  // rows * heads, each seq_len x seq_len
    nn::Matrix<T> context;
  };

  SelfAttention() = default;
  SelfAttention(std::size_t hidden, std::size_t heads);

  /// Returns the per-head context before the output projection.
  nn::Matrix<T> forward(const TokenBatch& batch, const nn::Matrix<T>& x, Cache* cache) const;
  nn::Matrix<T> backward(const TokenBatch& batch, const nn::Matrix<T>& x, const Cache& cache,
                         const nn::Matrix<T>& d_context);

  void visit(const std::string& prefix, const ParameterVisitor<T>& fn);

  nn::Linear<T> query, key, value;
  std::size_t heads = 1;
};

/// Post-norm transformer block: LN(x + Attn(x)), then LN(h + FFN(h)).
template <typename T>
class EncoderLayer {
 public:
  struct Cache {
    nn::Matrix<T> input;
    typename SelfAttention<T>::Cache attn;
    nn::Matrix<T> attn_residual;  // input of the first LayerNorm
    nn::Matrix<T> h1;
    nn::Matrix<T> inter_pre;
    nn::Matrix<T> inter_act;
    nn::Matrix<T> ffn_residual;   // input of the second LayerNorm
  };

  EncoderLayer() = default;
  explicit EncoderLayer(const BackboneConfig& cfg);

  nn::Matrix<T> forward(const TokenBatch& batch, const nn::Matrix<T>& x, Cache* cache) const;
  nn::Matrix<T> backward(const TokenBatch& batch, const Cache& cache, const nn::Matrix<T>& dy);

  void visit(const std::string& prefix, const ParameterVisitor<T>& fn);

  SelfAttention<T> attention;
  nn::Linear<T> attn_out;
  nn::LayerNorm<T> attn_norm;
  nn::Linear<T> intermediate;
  nn::Linear<T> output;
  nn::LayerNorm<T> out_norm;
  Activation act = Activation::Gelu;
};

/// RoBERTa-family encoder. Parameter names follow the Hugging Face layout
/// ("embeddings.word_embeddings.weight", "encoder.layer.0.attention.self.query.weight", ...).
template <typename T>
class Backbone {
 public:
  struct Cache {
    std::vector<std::size_t> positions;
    nn::Matrix<T> emb_pre_norm;
    std::vector<typename EncoderLayer<T>::Cache> layers;
  };

  explicit Backbone(const BackboneConfig& cfg);

  /// Hidden states for every token, (rows * seq_len) x hidden.
  nn::Matrix<T> forward(const TokenBatch& batch, Cache* cache) const;
  void backward(const TokenBatch& batch, const Cache& cache, const nn::Matrix<T>& d_hidden);

  void init_random(nn::Rng& rng, double stddev = 0.02);
  void visit(const ParameterVisitor<T>& fn);

  const BackboneConfig& config() const noexcept { return cfg_; }

 private:
  BackboneConfig cfg_;
  Embeddings<T> embeddings_;
  std::vector<EncoderLayer<T>> layers_;
};

}  // namespace hope
