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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hope::utf8 {

class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::size_t byte_offset, const std::string& what)
      : std::runtime_error(what), offset_(byte_offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Strict decoder: rejects overlong forms, surrogates, and truncated sequences.
std::u32string decode(std::string_view bytes);

/// Replaces each invalid byte with U+FFFD instead of throwing.
std::u32string decode_lossy(std::string_view bytes);

/// Byte offset of the first invalid sequence, or nullopt if `bytes` is valid UTF-8.
std::optional<std::size_t> first_invalid(std::string_view bytes) noexcept;

void append(std::string& out, char32_t cp);
std::string encode(std::u32string_view cps);

/// Number of code points; assumes valid input.
std::size_t length(std::string_view bytes);

/// Unicode White_Space property.
bool is_space(char32_t cp) noexcept;

/// Simple (1:1) lowercase mapping for Latin, Greek, Cyrillic, Armenian and
/// fullwidth Latin; other code points map to themselves.
char32_t to_lower(char32_t cp) noexcept;

/// Inverse of to_lower over the same ranges. ß maps to ẞ so the pair stays 1:1.
char32_t to_upper(char32_t cp) noexcept;

}  // namespace hope::utf8
