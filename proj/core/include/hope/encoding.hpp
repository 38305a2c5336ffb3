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
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hope/textclean.hpp"
#include "hope/tokenizer.hpp"

namespace hope {

class EncodingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Classifier input for one instance. Real tokens occupy the first `length`
/// positions (mask 1); any padding follows them (mask 0).
struct Encoding {
  std::vector<TokenId> input_ids;
  std::vector<std::uint8_t> attention_mask;
  std::size_t length = 0;

  std::size_t padded_length() const noexcept { return input_ids.size(); }

  friend bool operator==(const Encoding&, const Encoding&) = default;
};

/// min(configured, capacity): the configured maximum is kept verbatim in
/// configs while the backbone's position table bounds what is usable.
std::size_t effective_max_length(std::size_t configured, std::size_t position_capacity) noexcept;

/// [bos] + subwords + [eos]; overlong inputs keep their leading subwords and
/// still end in eos, giving exactly `max_len` ids. No padding.
Encoding encode(const CleanText& text, const Tokenizer& tok, std::size_t max_len,
                std::string_view instance_id = {});

/// Same contract for arbitrary UTF-8; malformed input raises EncodingError
/// naming `instance_id`.
Encoding encode_text(std::string_view text, const Tokenizer& tok, std::size_t max_len,
                     std::string_view instance_id = {});

/// Encodes every text and right-pads all of them to the longest one.
std::vector<Encoding> batch_encode(std::span<const CleanText> texts, const Tokenizer& tok,
                                   std::size_t max_len);

/// Right-pads unpadded encodings to their common maximum length.
std::vector<Encoding> pad_batch(std::span<const Encoding> encodings, TokenId pad_id);

}  // namespace hope
