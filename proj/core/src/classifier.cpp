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

#include "hope/classifier.hpp"

#include <cmath>

#include "hope/safetensors.hpp"

namespace hope {
using nn::Matrix;

std::vector<std::array<double, 2>> probabilities(const ClassifierOutput& out) {
  std::vector<std::array<double, 2>> probs(out.rows);
  for (std::size_t i = 0; i < out.rows; ++i) {
    const auto r = out.row(i);
    for (double v : r) {
      if (!std::isfinite(v)) {
        throw NonFiniteError(i, "non-finite logit for instance " + std::to_string(i));
      }
    }
    if (out.width == 1) {
      const double p = 1.0 / (1.0 + std::exp(-r[0]));
      probs[i] = {1.0 - p, p};
    } else {
      const double m = std::max(r[0], r[1]);
      const double e0 = std::exp(r[0] - m);
      const double e1 = std::exp(r[1] - m);
      probs[i] = {e0 / (e0 + e1), e1 / (e0 + e1)};
    }
  }
  return probs;
}

std::vector<Label> predict(const ClassifierOutput& out) {
  std::vector<Label> labels(out.rows);
  for (std::size_t i = 0; i < out.rows; ++i) {
    const auto r = out.row(i);
    const bool hope = out.width == 1 ? r[0] > 0.0 : r[1] > r[0];
    labels[i] = hope ? Label::Hope : Label::NotHope;
  }
  return labels;
}

// ---------------------------------------------------------------------------

template <typename T>
ClassificationHead<T>::ClassificationHead(std::size_t hidden, std::size_t outputs, Activation act,
                                          double dropout)
    : dense(hidden, hidden), out_proj(hidden, outputs), activation(act), dropout_rate(dropout) {}

template <typename T>
Matrix<T> ClassificationHead<T>::forward(const Matrix<T>& pooled, nn::Rng* dropout_rng,
                                         Cache* cache) const {
  Matrix<T> mask;
  Matrix<T> dropped;
  if (dropout_rng && dropout_rate > 0.0) {
    mask = nn::dropout_mask<T>(pooled.rows(), pooled.cols(), dropout_rate, *dropout_rng);
    dropped = pooled.cwiseProduct(mask);
  } else {
    dropped = pooled;
  }
  Matrix<T> pre = dense.forward(dropped);
  Matrix<T> act = nn::activate(activation, pre);
  Matrix<T> logits = out_proj.forward(act);
  if (cache) {
    cache->input = pooled;
    cache->dropped = std::move(dropped);
    cache->mask = std::move(mask);
    cache->pre = std::move(pre);
    cache->act = std::move(act);
  }
  return logits;
}

template <typename T>
Matrix<T> ClassificationHead<T>::backward(const Cache& c, const Matrix<T>& d_logits) {
  const Matrix<T> d_act = out_proj.backward(c.act, d_logits);
  const Matrix<T> d_pre = nn::activate_backward(activation, c.pre, d_act);
  Matrix<T> d_dropped = dense.backward(c.dropped, d_pre);
  if (c.mask.size() != 0) d_dropped = d_dropped.cwiseProduct(c.mask);
  return d_dropped;
}

template <typename T>
void ClassificationHead<T>::init(nn::Rng& rng, double stddev) {
  dense.init(rng, stddev);
  out_proj.init(rng, stddev);
}

template <typename T>
void ClassificationHead<T>::visit(const std::string& prefix, const ParameterVisitor<T>& fn) {
  fn(prefix + "dense.weight", dense.weight);
  fn(prefix + "dense.bias", dense.bias);
  fn(prefix + "out_proj.weight", out_proj.weight);
  fn(prefix + "out_proj.bias", out_proj.bias);
}

// ---------------------------------------------------------------------------

namespace {

const HyperParams& checked(const HyperParams& params, const BackboneConfig& cfg) {
  params.validate();
  const auto issues = backbone_mismatches(params, cfg);
  if (!issues.empty()) {
    std::string msg = "dimension mismatch between config and backbone '" + cfg.architecture + "'";
    for (const auto& s : issues) msg += "; " + s;
    throw ModelError(msg);
  }
  return params;
}

}  // namespace

template <typename T>
SequenceClassifier<T>::SequenceClassifier(const HyperParams& params, const BackboneConfig& backbone)
    : params_(checked(params, backbone)),
      backbone_(backbone),
      head_(params.hidden_size, params.num_outputs(), params.activation, params.dropout_rate),
      dropout_rng_(nn::Rng::derive(params.seed, nn::stream::kDropout)) {}

template <typename T>
std::size_t SequenceClassifier<T>::max_input_length() const noexcept {
  return effective_max_length(params_.max_sequence_length, backbone_.config().position_capacity());
}

template <typename T>
Matrix<T> SequenceClassifier<T>::pool(const TokenBatch& batch, const Matrix<T>& hidden) const {
  Matrix<T> pooled(static_cast<Eigen::Index>(batch.rows), hidden.cols());
  for (std::size_t b = 0; b < batch.rows; ++b) {
    pooled.row(static_cast<Eigen::Index>(b)) =
        hidden.row(static_cast<Eigen::Index>(b * batch.seq_len));
  }
  return pooled;
}

template <typename T>
ClassifierOutput SequenceClassifier<T>::to_output(const Matrix<T>& logits) {
  ClassifierOutput out;
  out.rows = static_cast<std::size_t>(logits.rows());
  out.width = static_cast<std::size_t>(logits.cols());
  out.logits.resize(out.rows * out.width);
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    out.logits[static_cast<std::size_t>(i)] = static_cast<double>(logits.data()[i]);
  }
  return out;
}

template <typename T>
ClassifierOutput SequenceClassifier<T>::infer(std::span<const Encoding> batch) const {
  const TokenBatch tb = TokenBatch::from_encodings(batch);
  if (tb.seq_len > max_input_length()) {
    throw ShapeError("batch length " + std::to_string(tb.seq_len) + " exceeds the maximum of " +
                     std::to_string(max_input_length()));
  }
  const Matrix<T> hidden = backbone_.forward(tb, nullptr);
  return to_output(head_.forward(pool(tb, hidden), nullptr, nullptr));
}

template <typename T>
ClassifierOutput SequenceClassifier<T>::forward(std::span<const Encoding> batch, bool train_mode) {
  if (!train_mode) return infer(batch);
  return to_output(forward_train(batch, true).logits);
}

template <typename T>
typename SequenceClassifier<T>::TrainingPass SequenceClassifier<T>::forward_train(
    std::span<const Encoding> batch, bool apply_dropout) {
  TrainingPass pass;
  pass.batch = TokenBatch::from_encodings(batch);
  if (pass.batch.seq_len > max_input_length()) {
    throw ShapeError("batch length " + std::to_string(pass.batch.seq_len) +
                     " exceeds the maximum of " + std::to_string(max_input_length()));
  }
  const Matrix<T> hidden = backbone_.forward(pass.batch, &pass.backbone);
  pass.logits = head_.forward(pool(pass.batch, hidden), apply_dropout ? &dropout_rng_ : nullptr,
                              &pass.head);
  return pass;
}

template <typename T>
void SequenceClassifier<T>::backward(const TrainingPass& pass, const Matrix<T>& d_logits,
                                     bool update_backbone) {
  if (d_logits.rows() != pass.logits.rows() || d_logits.cols() != pass.logits.cols()) {
    throw ShapeError("gradient shape does not match logits");
  }
  const Matrix<T> d_pooled = head_.backward(pass.head, d_logits);
  if (!update_backbone) return;
  const auto n = static_cast<Eigen::Index>(pass.batch.rows * pass.batch.seq_len);
  Matrix<T> d_hidden = Matrix<T>::Zero(n, d_pooled.cols());
  for (std::size_t b = 0; b < pass.batch.rows; ++b) {
    d_hidden.row(static_cast<Eigen::Index>(b * pass.batch.seq_len)) =
        d_pooled.row(static_cast<Eigen::Index>(b));
  }
  backbone_.backward(pass.batch, pass.backbone, d_hidden);
}

template <typename T>
void SequenceClassifier<T>::zero_grad() {
  visit_parameters([](const std::string&, nn::Parameter<T>& p) { p.zero_grad(); });
}

template <typename T>
void SequenceClassifier<T>::visit_parameters(const ParameterVisitor<T>& fn) {
  backbone_.visit([&](const std::string& name, nn::Parameter<T>& p) { fn("roberta." + name, p); });
  head_.visit("classifier.", fn);
}

template <typename T>
void SequenceClassifier<T>::init_head(std::uint64_t seed) {
  nn::Rng rng = nn::Rng::derive(seed, nn::stream::kHeadInit);
  head_.init(rng);
}

template <typename T>
void SequenceClassifier<T>::reset_dropout_stream(std::uint64_t seed) {
  dropout_rng_ = nn::Rng::derive(seed, nn::stream::kDropout);
}

// ---------------------------------------------------------------------------

template <typename T>
void load_backbone_weights(Backbone<T>& backbone, const std::filesystem::path& path) {
  const SafetensorsFile file = SafetensorsFile::open(path);
  backbone.visit([&](const std::string& name, nn::Parameter<T>& p) {
    std::string key = name;
    if (!file.contains(key)) key = "roberta." + name;
    if (!file.contains(key)) {
      // Older checkpoints name LayerNorm parameters gamma/beta.
      std::string alt = name;
      if (alt.ends_with("LayerNorm.weight")) alt.replace(alt.size() - 6, 6, "gamma");
      if (alt.ends_with("LayerNorm.bias")) alt.replace(alt.size() - 4, 4, "beta");
      key = file.contains(alt) ? alt : "roberta." + alt;
    }
    if (!file.contains(key)) {
      throw ModelError("missing weights: " + path.string() + " has no tensor for '" + name + "'");
    }
    const auto& info = file.info(key);
    const auto numel = static_cast<std::size_t>(p.value.size());
    const bool shape_ok =
        info.numel() == numel &&
        (info.shape.size() == 1 ? p.value.rows() == 1
                                : info.shape.size() == 2 &&
                                      info.shape[0] == static_cast<std::size_t>(p.value.rows()));
    if (!shape_ok) {
      std::string shape;
      for (auto d : info.shape) shape += (shape.empty() ? "" : "x") + std::to_string(d);
      throw ModelError("dimension mismatch for '" + key + "': file has " + shape + ", model expects " +
                       std::to_string(p.value.rows()) + "x" + std::to_string(p.value.cols()));
    }
    const std::vector<double> values = file.read(key);
    for (std::size_t i = 0; i < numel; ++i) p.value.data()[i] = static_cast<T>(values[i]);
  });
}

template <typename T>
std::unique_ptr<SequenceClassifier<T>> build_model(const HyperParams& params,
                                                   const BackboneSource& source) {
  params.validate();
  std::unique_ptr<SequenceClassifier<T>> model;
  if (source.kind == BackboneSource::Kind::Toy) {
    const auto cfg = BackboneConfig::toy(params, source.toy_vocab_size, source.toy_max_positions);
    model = std::make_unique<SequenceClassifier<T>>(params, cfg);
    nn::Rng rng = nn::Rng::derive(params.seed, nn::stream::kBackboneInit);
    model->backbone().init_random(rng);
  } else {
    const auto cfg = BackboneConfig::from_config_json(source.directory / "config.json");
    model = std::make_unique<SequenceClassifier<T>>(params, cfg);
    load_backbone_weights(model->backbone(), source.directory / "model.safetensors");
  }
  model->init_head(params.seed);
  return model;
}

template class ClassificationHead<float>;
template class ClassificationHead<double>;
template class SequenceClassifier<float>;
template class SequenceClassifier<double>;
template std::unique_ptr<SequenceClassifier<float>> build_model<float>(const HyperParams&,
                                                                       const BackboneSource&);
template std::unique_ptr<SequenceClassifier<double>> build_model<double>(const HyperParams&,
                                                                         const BackboneSource&);
template void load_backbone_weights<float>(Backbone<float>&, const std::filesystem::path&);
template void load_backbone_weights<double>(Backbone<double>&, const std::filesystem::path&);

}  // namespace hope
