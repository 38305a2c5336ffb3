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

#include <string>
#include <string_view>

namespace hope {

/// Normalized post text: only a-z, ä, ö, ü, ß and single inner spaces, with
/// no leading or trailing whitespace. Produced by clean(); an empty value is
/// legal and is kept so that predictions stay aligned with instance ids.
class CleanText {
 public:
  CleanText() = default;

  const std::string& value() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  /// Re-admits text that was cleaned earlier (e.g. read back from a cleaned
  /// corpus file). Throws std::invalid_argument if `text` violates the
  /// alphabet or spacing rules.
  static CleanText from_cleaned(std::string text);

  friend bool operator==(const CleanText&, const CleanText&) = default;

 private:
  explicit CleanText(std::string v) : value_(std::move(v)) {}
  friend CleanText clean(std::string_view text);

  std::string value_;
};

std::string lowercase(std::string_view text);

/// Deletes every whitespace-delimited token that starts with "http://",
/// "https://" or "www." (ASCII case-insensitive). Surrounding whitespace is
/// left in place.
std::string strip_urls(std::string_view text);

/// Keeps a-z, A-Z, ä ö ü ß Ä Ö Ü and whitespace; deletes everything else,
/// which covers punctuation, digits, symbols and emoji in one pass.
std::string strip_non_letters(std::string_view text);

/// Collapses whitespace runs to one space and trims both ends.
std::string normalize_whitespace(std::string_view text);

/// lowercase -> strip_urls -> strip_non_letters -> normalize_whitespace.
/// URL removal has to run before the letter filter, otherwise URL bodies
/// leak letters ("httpstcoabc").
CleanText clean(std::string_view text);

/// True for the characters CleanText may contain besides the space.
bool is_clean_letter(char32_t cp) noexcept;

}  // namespace hope
