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

#include "hope/backbone.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"

#include "hope/fileio.hpp"

namespace hope {
using nn::Matrix;
using json = nlohmann::json;

void BackboneConfig::validate() const {
  const auto fail = [&](const std::string& what) {
    throw ModelError("backbone '" + architecture + "': " + what);
  };
  if (vocab_size == 0 || hidden_size == 0 || num_layers == 0 || num_attention_heads == 0 ||
      intermediate_size == 0 || type_vocab_size == 0) {
    fail("all dimensions must be positive");
  }
  if (hidden_size % num_attention_heads != 0) {
    fail("hidden_size " + std::to_string(hidden_size) + " not divisible by " +
         std::to_string(num_attention_heads) + " heads");
  }
  if (pad_token_id < 0 || static_cast<std::size_t>(pad_token_id) >= vocab_size) {
    fail("pad_token_id outside vocabulary");
  }
  if (position_capacity() < 2) fail("position table too small for two sentinel tokens");
  if (!(layer_norm_eps > 0)) fail("layer_norm_eps must be positive");
}

BackboneConfig BackboneConfig::from_config_json(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ModelError(path.string() + ": " + e.what());
  } catch (const IoError& e) {
    throw ModelError(std::string("missing backbone config: ") + e.what());
  }
  BackboneConfig c;
  try {
    c.architecture = doc.value("model_type", "roberta");
    c.vocab_size = doc.at("vocab_size").get<std::size_t>();
    c.hidden_size = doc.at("hidden_size").get<std::size_t>();
    c.num_layers = doc.at("num_hidden_layers").get<std::size_t>();
    c.num_attention_heads = doc.at("num_attention_heads").get<std::size_t>();
    c.intermediate_size = doc.at("intermediate_size").get<std::size_t>();
    c.max_position_embeddings = doc.value("max_position_embeddings", std::size_t{514});
    c.type_vocab_size = doc.value("type_vocab_size", std::size_t{1});
    c.pad_token_id = doc.value("pad_token_id", TokenId{1});
    c.layer_norm_eps = doc.value("layer_norm_eps", 1e-5);
    const std::string act = doc.value("hidden_act", "gelu");
    if (act == "gelu") {
      c.hidden_act = Activation::Gelu;
    } else if (act == "relu") {
      c.hidden_act = Activation::Relu;
    } else {
      throw ModelError(path.string() + ": unsupported hidden_act '" + act + "'");
    }
  } catch (const json::exception& e) {
    throw ModelError(path.string() + ": " + e.what());
  }
  c.validate();
  return c;
}

KeyValueDoc BackboneConfig::to_key_value(std::string_view prefix) const {
  const std::string p(prefix);
  KeyValueDoc d;
  d.set(p + "architecture", architecture);
  d.set(p + "vocab_size", vocab_size);
  d.set(p + "hidden_size", hidden_size);
  d.set(p + "num_layers", num_layers);
  d.set(p + "num_attention_heads", num_attention_heads);
  d.set(p + "intermediate_size", intermediate_size);
  d.set(p + "max_position_embeddings", max_position_embeddings);
  d.set(p + "type_vocab_size", type_vocab_size);
  d.set(p + "pad_token_id", static_cast<long long>(pad_token_id));
  d.set(p + "layer_norm_eps", layer_norm_eps);
  d.set(p + "hidden_act", nn::to_string(hidden_act));
  return d;
}

BackboneConfig BackboneConfig::from_key_value(const KeyValueDoc& d, std::string_view prefix) {
  const std::string p(prefix);
  const auto count = [&](const char* k) { return static_cast<std::size_t>(d.get_int(p + k)); };
  BackboneConfig c;
  c.architecture = d.get_string(p + "architecture");
  c.vocab_size = count("vocab_size");
  c.hidden_size = count("hidden_size");
  c.num_layers = count("num_layers");
  c.num_attention_heads = count("num_attention_heads");
  c.intermediate_size = count("intermediate_size");
  c.max_position_embeddings = count("max_position_embeddings");
  c.type_vocab_size = count("type_vocab_size");
  c.pad_token_id = static_cast<TokenId>(d.get_int(p + "pad_token_id"));
  c.layer_norm_eps = d.get_double(p + "layer_norm_eps");
  c.hidden_act = nn::parse_activation(d.get_string(p + "hidden_act"));
  c.validate();
  return c;
}

BackboneConfig BackboneConfig::toy(const HyperParams& params, std::size_t vocab_size,
                                   std::size_t max_positions) {
  BackboneConfig c;
  c.architecture = "toy-roberta";
  c.vocab_size = vocab_size;
  c.hidden_size = params.hidden_size;
  c.num_layers = params.num_layers;
  c.num_attention_heads = params.num_attention_heads;
  c.intermediate_size = params.intermediate_size;
  c.max_position_embeddings = max_positions;
  c.validate();
  return c;
}

std::vector<std::string> backbone_mismatches(const HyperParams& params, const BackboneConfig& cfg) {
  std::vector<std::string> out;
  const auto check = [&](const char* field, std::size_t configured, std::size_t actual) {
    if (configured != actual) {
      out.push_back(std::string(field) + ": config " + std::to_string(configured) +
                    " vs backbone " + std::to_string(actual));
    }
  };
  check("hidden_size", params.hidden_size, cfg.hidden_size);
  check("num_layers", params.num_layers, cfg.num_layers);
  check("num_attention_heads", params.num_attention_heads, cfg.num_attention_heads);
  check("intermediate_size", params.intermediate_size, cfg.intermediate_size);
  return out;
}

TokenBatch TokenBatch::from_encodings(std::span<const Encoding> batch) {
  if (batch.empty()) throw ShapeError("empty batch");
  TokenBatch tb;
  tb.rows = batch.size();
  tb.seq_len = batch.front().input_ids.size();
  tb.ids.reserve(tb.rows * tb.seq_len);
  tb.mask.reserve(tb.rows * tb.seq_len);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const auto& e = batch[b];
    if (e.input_ids.size() != e.attention_mask.size()) {
      throw ShapeError("batch row " + std::to_string(b) + ": " +
                       std::to_string(e.input_ids.size()) + " ids but " +
                       std::to_string(e.attention_mask.size()) + " mask entries");
    }
    if (e.input_ids.size() != tb.seq_len) {
      throw ShapeError("batch row " + std::to_string(b) + " has length " +
                       std::to_string(e.input_ids.size()) + ", expected " +
                       std::to_string(tb.seq_len) + " (pad the batch first)");
    }
    bool any = false;
    for (auto m : e.attention_mask) {
      if (m > 1) throw ShapeError("batch row " + std::to_string(b) + ": mask values must be 0/1");
      any = any || m == 1;
    }
    if (!any) throw ShapeError("batch row " + std::to_string(b) + " has no unmasked tokens");
    tb.ids.insert(tb.ids.end(), e.input_ids.begin(), e.input_ids.end());
    tb.mask.insert(tb.mask.end(), e.attention_mask.begin(), e.attention_mask.end());
  }
  return tb;
}

// ---------------------------------------------------------------------------

template <typename T>
Embeddings<T>::Embeddings(const BackboneConfig& cfg)
    : norm(cfg.hidden_size, cfg.layer_norm_eps),
      pad_token_id(cfg.pad_token_id),
      position_offset(cfg.position_offset()) {
  const auto h = static_cast<Eigen::Index>(cfg.hidden_size);
  word.resize(static_cast<Eigen::Index>(cfg.vocab_size), h);
  position.resize(static_cast<Eigen::Index>(cfg.max_position_embeddings), h);
  token_type.resize(static_cast<Eigen::Index>(cfg.type_vocab_size), h);
}

template <typename T>
Matrix<T> Embeddings<T>::forward(const TokenBatch& batch, std::vector<std::size_t>* positions,
                                 Matrix<T>* pre_norm) const {
  const auto n = static_cast<Eigen::Index>(batch.rows * batch.seq_len);
  Matrix<T> pre(n, word.value.cols());
  std::vector<std::size_t> pos_ids(static_cast<std::size_t>(n));
  const auto vocab = static_cast<std::size_t>(word.value.rows());
  const auto table = static_cast<std::size_t>(position.value.rows());
  for (std::size_t b = 0; b < batch.rows; ++b) {
    std::size_t real = 0;
    for (std::size_t i = 0; i < batch.seq_len; ++i) {
      const std::size_t idx = b * batch.seq_len + i;
      const TokenId id = batch.ids[idx];
      if (id < 0 || static_cast<std::size_t>(id) >= vocab) {
        throw ShapeError("token id " + std::to_string(id) + " outside vocabulary of size " +
                         std::to_string(vocab));
      }
      const std::size_t pos =
          batch.mask[idx] ? position_offset + real++ : static_cast<std::size_t>(pad_token_id);
      if (pos >= table) {
        throw ShapeError("sequence of " + std::to_string(real) +
                         " tokens exceeds the position table (" + std::to_string(table) +
                         " entries)");
      }
      pos_ids[idx] = pos;
      const auto r = static_cast<Eigen::Index>(idx);
      pre.row(r) = word.value.row(id) + position.value.row(static_cast<Eigen::Index>(pos)) +
                   token_type.value.row(0);
    }
  }
  Matrix<T> y = norm.forward(pre);
  if (positions) *positions = std::move(pos_ids);
  if (pre_norm) *pre_norm = std::move(pre);
  return y;
}

template <typename T>
void Embeddings<T>::backward(const TokenBatch& batch, const std::vector<std::size_t>& positions,
                             const Matrix<T>& pre_norm, const Matrix<T>& dy) {
  const Matrix<T> dpre = norm.backward(pre_norm, dy);
  for (std::size_t idx = 0; idx < batch.ids.size(); ++idx) {
    const auto r = static_cast<Eigen::Index>(idx);
    word.grad.row(batch.ids[idx]) += dpre.row(r);
    position.grad.row(static_cast<Eigen::Index>(positions[idx])) += dpre.row(r);
    token_type.grad.row(0) += dpre.row(r);
  }
}

template <typename T>
void Embeddings<T>::visit(const std::string& prefix, const ParameterVisitor<T>& fn) {
  fn(prefix + "word_embeddings.weight", word);
  fn(prefix + "position_embeddings.weight", position);
  fn(prefix + "token_type_embeddings.weight", token_type);
  fn(prefix + "LayerNorm.weight", norm.gamma);
  fn(prefix + "LayerNorm.bias", norm.beta);
}

// ---------------------------------------------------------------------------

template <typename T>
SelfAttention<T>::SelfAttention(std::size_t hidden, std::size_t heads_)
    : query(hidden, hidden), key(hidden, hidden), value(hidden, hidden), heads(heads_) {}

template <typename T>
Matrix<T> SelfAttention<T>::forward(const TokenBatch& batch, const Matrix<T>& x,
                                    Cache* cache) const {
  const auto L = static_cast<Eigen::Index>(batch.seq_len);
  const auto width = static_cast<Eigen::Index>(query.out_features());
  const auto d = width / static_cast<Eigen::Index>(heads);
  const T scale = T(1) / std::sqrt(static_cast<T>(d));

  Matrix<T> q = query.forward(x);
  Matrix<T> k = key.forward(x);
  Matrix<T> v = value.forward(x);
  Matrix<T> context = Matrix<T>::Zero(x.rows(), width);
  if (cache) cache->probs.assign(batch.rows * heads, Matrix<T>());

  constexpr T kMasked = -std::numeric_limits<T>::infinity();
  for (std::size_t b = 0; b < batch.rows; ++b) {
    const auto r0 = static_cast<Eigen::Index>(b) * L;
    const std::uint8_t* mask = batch.mask.data() + b * batch.seq_len;
    for (std::size_t h = 0; h < heads; ++h) {
      const auto c0 = static_cast<Eigen::Index>(h) * d;
      Matrix<T> p = (q.block(r0, c0, L, d) * k.block(r0, c0, L, d).transpose()) * scale;
      for (Eigen::Index j = 0; j < L; ++j) {
        if (!mask[j]) p.col(j).setConstant(kMasked);
      }
      for (Eigen::Index i = 0; i < L; ++i) {
        const T mx = p.row(i).maxCoeff();
        T sum = 0;
        for (Eigen::Index j = 0; j < L; ++j) {
          const T e = mask[j] ? std::exp(p(i, j) - mx) : T(0);
          p(i, j) = e;
          sum += e;
        }
        p.row(i) /= sum;
      }
      context.block(r0, c0, L, d).noalias() = p * v.block(r0, c0, L, d);
      if (cache) cache->probs[b * heads + h] = std::move(p);
    }
  }
  if (cache) {
    cache->q = std::move(q);
    cache->k = std::move(k);
    cache->v = std::move(v);
    cache->context = context;
  }
  return context;
}

template <typename T>
Matrix<T> SelfAttention<T>::backward(const TokenBatch& batch, const Matrix<T>& x,
                                     const Cache& cache, const Matrix<T>& d_context) {
  const auto L = static_cast<Eigen::Index>(batch.seq_len);
  const auto width = static_cast<Eigen::Index>(query.out_features());
  const auto d = width / static_cast<Eigen::Index>(heads);
  const T scale = T(1) / std::sqrt(static_cast<T>(d));

  Matrix<T> dq = Matrix<T>::Zero(x.rows(), width);
  Matrix<T> dk = Matrix<T>::Zero(x.rows(), width);
  Matrix<T> dv = Matrix<T>::Zero(x.rows(), width);
  for (std::size_t b = 0; b < batch.rows; ++b) {
    const auto r0 = static_cast<Eigen::Index>(b) * L;
    for (std::size_t h = 0; h < heads; ++h) {
      const auto c0 = static_cast<Eigen::Index>(h) * d;
      const Matrix<T>& p = cache.probs[b * heads + h];
      const auto d_out = d_context.block(r0, c0, L, d);
      dv.block(r0, c0, L, d).noalias() = p.transpose() * d_out;
      Matrix<T> dp = d_out * cache.v.block(r0, c0, L, d).transpose();
      for (Eigen::Index i = 0; i < L; ++i) {
        const T dot = dp.row(i).dot(p.row(i));
        dp.row(i) = (p.row(i).array() * (dp.row(i).array() - dot)).matrix();
      }
      dp *= scale;
      dq.block(r0, c0, L, d).noalias() = dp * cache.k.block(r0, c0, L, d);
      dk.block(r0, c0, L, d).noalias() = dp.transpose() * cache.q.block(r0, c0, L, d);
    }
  }
  Matrix<T> dx = query.backward(x, dq);
  dx += key.backward(x, dk);
  dx += value.backward(x, dv);
  return dx;
}

template <typename T>
void SelfAttention<T>::visit(const std::string& prefix, const ParameterVisitor<T>& fn) {
  fn(prefix + "query.weight", query.weight);
  fn(prefix + "query.bias", query.bias);
  fn(prefix + "key.weight", key.weight);
  fn(prefix + "key.bias", key.bias);
  fn(prefix + "value.weight", value.weight);
  fn(prefix + "value.bias", value.bias);
}

// ---------------------------------------------------------------------------

template <typename T>
EncoderLayer<T>::EncoderLayer(const BackboneConfig& cfg)
    : attention(cfg.hidden_size, cfg.num_attention_heads),
      attn_out(cfg.hidden_size, cfg.hidden_size),
      attn_norm(cfg.hidden_size, cfg.layer_norm_eps),
      intermediate(cfg.hidden_size, cfg.intermediate_size),
      output(cfg.intermediate_size, cfg.hidden_size),
      out_norm(cfg.hidden_size, cfg.layer_norm_eps),
      act(cfg.hidden_act) {}

template <typename T>
Matrix<T> EncoderLayer<T>::forward(const TokenBatch& batch, const Matrix<T>& x,
                                   Cache* cache) const {
  typename SelfAttention<T>::Cache* attn_cache = cache ? &cache->attn : nullptr;
  const Matrix<T> context = attention.forward(batch, x, attn_cache);
  Matrix<T> r1 = x + attn_out.forward(context);
  Matrix<T> h1 = attn_norm.forward(r1);
  Matrix<T> pre = intermediate.forward(h1);
  Matrix<T> act_out = nn::activate(act, pre);
  Matrix<T> r2 = h1 + output.forward(act_out);
  Matrix<T> y = out_norm.forward(r2);
  if (cache) {
    cache->input = x;
    cache->attn_residual = std::move(r1);
    cache->h1 = std::move(h1);
    cache->inter_pre = std::move(pre);
    cache->inter_act = std::move(act_out);
    cache->ffn_residual = std::move(r2);
  }
  return y;
}

template <typename T>
Matrix<T> EncoderLayer<T>::backward(const TokenBatch& batch, const Cache& c, const Matrix<T>& dy) {
  const Matrix<T> dr2 = out_norm.backward(c.ffn_residual, dy);
  const Matrix<T> d_act = output.backward(c.inter_act, dr2);
  const Matrix<T> d_pre = nn::activate_backward(act, c.inter_pre, d_act);
  const Matrix<T> dh1 = dr2 + intermediate.backward(c.h1, d_pre);
  const Matrix<T> dr1 = attn_norm.backward(c.attn_residual, dh1);
  const Matrix<T> d_context = attn_out.backward(c.attn.context, dr1);
  return dr1 + attention.backward(batch, c.input, c.attn, d_context);
}

template <typename T>
void EncoderLayer<T>::visit(const std::string& prefix, const ParameterVisitor<T>& fn) {
  attention.visit(prefix + "attention.self.", fn);
  fn(prefix + "attention.output.dense.weight", attn_out.weight);
  fn(prefix + "attention.output.dense.bias", attn_out.bias);
  fn(prefix + "attention.output.LayerNorm.weight", attn_norm.gamma);
  fn(prefix + "attention.output.LayerNorm.bias", attn_norm.beta);
  fn(prefix + "intermediate.dense.weight", intermediate.weight);
  fn(prefix + "intermediate.dense.bias", intermediate.bias);
  fn(prefix + "output.dense.weight", output.weight);
  fn(prefix + "output.dense.bias", output.bias);
  fn(prefix + "output.LayerNorm.weight", out_norm.gamma);
  fn(prefix + "output.LayerNorm.bias", out_norm.beta);
}

// ---------------------------------------------------------------------------

template <typename T>
Backbone<T>::Backbone(const BackboneConfig& cfg) : cfg_(cfg), embeddings_(cfg) {
  cfg_.validate();
  layers_.reserve(cfg.num_layers);
  for (std::size_t l = 0; l < cfg.num_layers; ++l) layers_.emplace_back(cfg);
}

template <typename T>
Matrix<T> Backbone<T>::forward(const TokenBatch& batch, Cache* cache) const {
  Matrix<T> h = cache ? embeddings_.forward(batch, &cache->positions, &cache->emb_pre_norm)
                      : embeddings_.forward(batch, nullptr, nullptr);
  if (cache) cache->layers.resize(layers_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    h = layers_[l].forward(batch, h, cache ? &cache->layers[l] : nullptr);
  }
  return h;
}

template <typename T>
void Backbone<T>::backward(const TokenBatch& batch, const Cache& cache, const Matrix<T>& d_hidden) {
  Matrix<T> d = d_hidden;
  for (std::size_t l = layers_.size(); l-- > 0;) d = layers_[l].backward(batch, cache.layers[l], d);
  embeddings_.backward(batch, cache.positions, cache.emb_pre_norm, d);
}

template <typename T>
void Backbone<T>::init_random(nn::Rng& rng, double stddev) {
  nn::fill_normal(embeddings_.word.value, rng, stddev);
  embeddings_.word.value.row(cfg_.pad_token_id).setZero();
  nn::fill_normal(embeddings_.position.value, rng, stddev);
  nn::fill_normal(embeddings_.token_type.value, rng, stddev);
  for (auto& layer : layers_) {
    layer.attention.query.init(rng, stddev);
    layer.attention.key.init(rng, stddev);
    layer.attention.value.init(rng, stddev);
    layer.attn_out.init(rng, stddev);
    layer.intermediate.init(rng, stddev);
    layer.output.init(rng, stddev);
  }
}

template <typename T>
void Backbone<T>::visit(const ParameterVisitor<T>& fn) {
  embeddings_.visit("embeddings.", fn);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    layers_[l].visit("encoder.layer." + std::to_string(l) + ".", fn);
  }
}

template class Embeddings<float>;
template class Embeddings<double>;
template class SelfAttention<float>;
template class SelfAttention<double>;
template class EncoderLayer<float>;
template class EncoderLayer<double>;
template class Backbone<float>;
template class Backbone<double>;

}  // namespace hope
