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

#include "hope/encoding.hpp"

#include <algorithm>

namespace hope {

std::size_t effective_max_length(std::size_t configured, std::size_t position_capacity) noexcept {
  return std::min(configured, position_capacity);
}

Encoding encode_text(std::string_view text, const Tokenizer& tok, std::size_t max_len,
                     std::string_view instance_id) {
  if (max_len < 2) {
    throw std::invalid_argument("max_len must be at least 2 to hold the sentinel tokens, got " +
                                std::to_string(max_len));
  }
  std::vector<TokenId> body;
  try {
    body = tok.tokenize(text);
  } catch (const TokenizerError& e) {
    throw EncodingError("cannot tokenize instance '" +
                        std::string(instance_id.empty() ? "<unnamed>" : instance_id) +
                        "': " + e.what());
  }
  const std::size_t keep = std::min(body.size(), max_len - 2);
  Encoding enc;
  enc.input_ids.reserve(keep + 2);
  enc.input_ids.push_back(tok.specials().bos);
  enc.input_ids.insert(enc.input_ids.end(), body.begin(),
                       body.begin() + static_cast<std::ptrdiff_t>(keep));
  enc.input_ids.push_back(tok.specials().eos);
  enc.length = enc.input_ids.size();
  enc.attention_mask.assign(enc.length, 1);
  return enc;
}

Encoding encode(const CleanText& text, const Tokenizer& tok, std::size_t max_len,
                std::string_view instance_id) {
  return encode_text(text.value(), tok, max_len, instance_id);
}

std::vector<Encoding> pad_batch(std::span<const Encoding> encodings, TokenId pad_id) {
  std::size_t width = 0;
  for (const auto& e : encodings) width = std::max(width, e.length);
  std::vector<Encoding> out(encodings.begin(), encodings.end());
  for (auto& e : out) {
    e.input_ids.resize(e.length);
    e.attention_mask.resize(e.length);
    e.input_ids.resize(width, pad_id);
    e.attention_mask.resize(width, 0);
  }
  return out;
}

std::vector<Encoding> batch_encode(std::span<const CleanText> texts, const Tokenizer& tok,
                                   std::size_t max_len) {
  if (texts.empty()) throw std::invalid_argument("batch_encode: empty batch");
  std::vector<Encoding> encs;
  encs.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    encs.push_back(encode(texts[i], tok, max_len, "#" + std::to_string(i)));
  }
  return pad_batch(encs, tok.specials().pad);
}

}  // namespace hope
