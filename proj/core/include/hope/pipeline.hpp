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
#include <span>
#include <vector>

#include "hope/classifier.hpp"
#include "hope/corpus.hpp"
#include "hope/encoding.hpp"
#include "hope/tokenizer.hpp"

namespace hope {

/// Cleans and encodes every instance of a split, unpadded, in split order.
std::vector<Encoding> encode_split(const DatasetSplit& split, const Tokenizer& tok,
                                   std::size_t max_len);

/// Gold labels in split order. Throws MissingLabelError on the first
/// unlabeled instance.
std::vector<Label> gold_labels(const DatasetSplit& split);

/// Eval-mode logits for all encodings, run in padded chunks of `batch_size`.
template <typename T>
ClassifierOutput infer_batched(const SequenceClassifier<T>& model,
                               std::span<const Encoding> encodings, std::size_t batch_size,
                               TokenId pad_id);

/// One label per instance, in split order, including instances whose text is
/// empty after cleaning.
template <typename T>
std::vector<Label> predict_split(const SequenceClassifier<T>& model, const Tokenizer& tok,
                                 const DatasetSplit& split, std::size_t batch_size);

}  // namespace hope
