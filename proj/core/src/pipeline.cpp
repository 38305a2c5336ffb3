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

#include "hope/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

#include "hope/textclean.hpp"

namespace hope {

std::vector<Encoding> encode_split(const DatasetSplit& split, const Tokenizer& tok,
                                   std::size_t max_len) {
  std::vector<Encoding> out;
  out.reserve(split.size());
  for (const auto& inst : split.instances()) {
    out.push_back(encode(clean(inst.text), tok, max_len, inst.id));
  }
  return out;
}

std::vector<Label> gold_labels(const DatasetSplit& split) {
  std::vector<Label> out;
  out.reserve(split.size());
  for (const auto& inst : split.instances()) {
    if (!inst.label) throw MissingLabelError("instance " + inst.id + " has no label");
    out.push_back(*inst.label);
  }
  return out;
}

template <typename T>
ClassifierOutput infer_batched(const SequenceClassifier<T>& model,
                               std::span<const Encoding> encodings, std::size_t batch_size,
                               TokenId pad_id) {
  if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
  ClassifierOutput all;
  all.width = model.params().num_outputs();
  all.rows = encodings.size();
  all.logits.reserve(all.rows * all.width);
  for (std::size_t start = 0; start < encodings.size(); start += batch_size) {
    const std::size_t n = std::min(batch_size, encodings.size() - start);
    const auto padded = pad_batch(encodings.subspan(start, n), pad_id);
    const ClassifierOutput out = model.infer(padded);
    all.logits.insert(all.logits.end(), out.logits.begin(), out.logits.end());
  }
  return all;
}

template <typename T>
std::vector<Label> predict_split(const SequenceClassifier<T>& model, const Tokenizer& tok,
                                 const DatasetSplit& split, std::size_t batch_size) {
  if (split.empty()) return {};
  const auto encodings = encode_split(split, tok, model.max_input_length());
  return predict(infer_batched(model, encodings, batch_size, tok.specials().pad));
}

template ClassifierOutput infer_batched(const SequenceClassifier<float>&,
                                        std::span<const Encoding>, std::size_t, TokenId);
template ClassifierOutput infer_batched(const SequenceClassifier<double>&,
                                        std::span<const Encoding>, std::size_t, TokenId);
template std::vector<Label> predict_split(const SequenceClassifier<float>&, const Tokenizer&,
                                          const DatasetSplit&, std::size_t);
template std::vector<Label> predict_split(const SequenceClassifier<double>&, const Tokenizer&,
                                          const DatasetSplit&, std::size_t);

}  // namespace hope
