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

#include "hope/textclean.hpp"

#include <stdexcept>

#include "hope/utf8.hpp"

namespace hope {
namespace {

constexpr bool is_allowed_letter(char32_t c) noexcept {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || c == U'ä' || c == U'ö' ||
         c == U'ü' || c == U'ß' || c == U'Ä' || c == U'Ö' || c == U'Ü';
}

bool starts_with_url_prefix(std::u32string_view tok) noexcept {
  const auto starts = [&](std::u32string_view prefix) {
    if (tok.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      char32_t c = tok[i];
      if (c >= U'A' && c <= U'Z') c += 32;
      if (c != prefix[i]) return false;
    }
    return true;
  };
  return starts(U"http://") || starts(U"https://") || starts(U"www.");
}

}  // namespace

bool is_clean_letter(char32_t cp) noexcept {
  return (cp >= U'a' && cp <= U'z') || cp == U'ä' || cp == U'ö' || cp == U'ü' || cp == U'ß';
}

std::string lowercase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : utf8::decode_lossy(text)) utf8::append(out, utf8::to_lower(cp));
  return out;
}

std::string strip_urls(std::string_view text) {
  const std::u32string cps = utf8::decode_lossy(text);
  std::u32string out;
  out.reserve(cps.size());
  std::size_t i = 0;
  while (i < cps.size()) {
    if (utf8::is_space(cps[i])) {
      out.push_back(cps[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && !utf8::is_space(cps[j])) ++j;
    const std::u32string_view tok(cps.data() + i, j - i);
    if (!starts_with_url_prefix(tok)) out.append(tok);
    i = j;
  }
  return utf8::encode(out);
}

std::string strip_non_letters(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : utf8::decode_lossy(text)) {
    if (is_allowed_letter(cp) || utf8::is_space(cp)) utf8::append(out, cp);
  }
  return out;
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending = false;
  for (char32_t cp : utf8::decode_lossy(text)) {
    if (utf8::is_space(cp)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    utf8::append(out, cp);
  }
  return out;
}

CleanText clean(std::string_view text) {
  return CleanText(normalize_whitespace(strip_non_letters(strip_urls(lowercase(text)))));
}

CleanText CleanText::from_cleaned(std::string text) {
  const auto bad = utf8::first_invalid(text);
  if (bad) throw std::invalid_argument("cleaned text is not valid UTF-8");
  const std::u32string cps = utf8::decode(text);
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    if (c == U' ') {
      if (i == 0 || i + 1 == cps.size() || cps[i + 1] == U' ') {
        throw std::invalid_argument("cleaned text has stray spaces: '" + text + "'");
      }
    } else if (!is_clean_letter(c)) {
      throw std::invalid_argument("cleaned text contains a disallowed character: '" + text + "'");
    }
  }
  return CleanText(std::move(text));
}

}  // namespace hope
