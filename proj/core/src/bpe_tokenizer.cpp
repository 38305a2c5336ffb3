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

#include <algorithm>
#include <array>
#include <climits>
#include <fstream>

#include "json.hpp"

#include "hope/fileio.hpp"
#include "hope/tokenizer.hpp"
#include "hope/utf8.hpp"

namespace hope {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// GPT-2's reversible byte -> printable code point table.
struct ByteTable {
  std::array<char32_t, 256> to_cp{};
  std::unordered_map<char32_t, unsigned char> to_byte;

  ByteTable() {
    std::array<bool, 256> direct{};
    for (int b = '!'; b <= '~'; ++b) direct[b] = true;
    for (int b = 0xA1; b <= 0xAC; ++b) direct[b] = true;
    for (int b = 0xAE; b <= 0xFF; ++b) direct[b] = true;
    char32_t next = 256;
    for (int b = 0; b < 256; ++b) {
      to_cp[b] = direct[b] ? static_cast<char32_t>(b) : next++;
      to_byte[to_cp[b]] = static_cast<unsigned char>(b);
    }
  }
};

const ByteTable& byte_table() {
  static const ByteTable table;
  return table;
}

enum class CharClass { Letter, Number, Space, Other };

CharClass classify(char32_t c) noexcept {
  if (utf8::is_space(c)) return CharClass::Space;
  if (c < 0x80) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return CharClass::Letter;
    if (c >= '0' && c <= '9') return CharClass::Number;
    return CharClass::Other;
  }
  // Approximation of \p{L}: Latin-1 punctuation, general punctuation,
  // symbol blocks and emoji are "other"; everything else counts as a letter.
  if ((c >= 0xA1 && c <= 0xBF) || c == 0xD7 || c == 0xF7) return CharClass::Other;
  if (c >= 0x2000 && c <= 0x2BFF) return CharClass::Other;
  if (c >= 0x3000 && c <= 0x303F) return CharClass::Other;
  if (c >= 0xFE00 && c <= 0xFE0F) return CharClass::Other;
  if (c >= 0x1F000) return CharClass::Other;
  return CharClass::Letter;
}

std::string merge_key(std::string_view a, std::string_view b) {
  std::string k;
  k.reserve(a.size() + b.size() + 1);
  k.append(a);
  k.push_back(' ');
  k.append(b);
  return k;
}

}  // namespace

ByteLevelBpeTokenizer::ByteLevelBpeTokenizer(std::string model_id, std::vector<std::string> vocab,
                                             std::vector<std::pair<std::string, std::string>> merges)
    : Tokenizer(model_id, vocab.size(), [&] {
        std::unordered_map<std::string, TokenId> lookup;
        for (std::size_t i = 0; i < vocab.size(); ++i) lookup.emplace(vocab[i], static_cast<TokenId>(i));
        const auto get = [&](const char* name) {
          auto it = lookup.find(name);
          if (it == lookup.end()) {
            throw TokenizerError(model_id + ": vocabulary has no '" + name + "' token");
          }
          return it->second;
        };
        return SpecialTokens{get("<s>"), get("<pad>"), get("</s>"), get("<unk>")};
      }()),
      id_to_token_(std::move(vocab)),
      merges_(std::move(merges)) {
  token_to_id_.reserve(id_to_token_.size());
  for (std::size_t i = 0; i < id_to_token_.size(); ++i) {
    token_to_id_.emplace(id_to_token_[i], static_cast<TokenId>(i));
  }
  merge_rank_.reserve(merges_.size());
  for (std::size_t r = 0; r < merges_.size(); ++r) {
    merge_rank_.emplace(merge_key(merges_[r].first, merges_[r].second), static_cast<int>(r));
  }
}

std::shared_ptr<ByteLevelBpeTokenizer> ByteLevelBpeTokenizer::from_files(
    const fs::path& vocab_json, const fs::path& merges_txt) {
  json vocab_doc;
  std::string merges_text;
  try {
    vocab_doc = json::parse(read_file(vocab_json));
    merges_text = read_file(merges_txt);
  } catch (const json::exception& e) {
    throw TokenizerError(vocab_json.string() + ": " + e.what());
  } catch (const IoError& e) {
    throw TokenizerError(e.what());
  }

  std::vector<std::string> vocab;
  for (const auto& [tok, id] : vocab_doc.items()) {
    if (!id.is_number_integer() || id.get<long long>() < 0) {
      throw TokenizerError(vocab_json.string() + ": bad id for token '" + tok + "'");
    }
    const auto idx = id.get<std::size_t>();
    if (vocab.size() <= idx) vocab.resize(idx + 1);
    vocab[idx] = tok;
  }

  std::vector<std::pair<std::string, std::string>> merges;
  std::size_t pos = 0;
  while (pos < merges_text.size()) {
    auto nl = merges_text.find('\n', pos);
    if (nl == std::string::npos) nl = merges_text.size();
    std::string_view line(merges_text.data() + pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.starts_with("#version")) continue;
    const auto sp = line.find(' ');
    if (sp == std::string_view::npos) {
      throw TokenizerError(merges_txt.string() + ": bad merge line '" + std::string(line) + "'");
    }
    merges.emplace_back(std::string(line.substr(0, sp)), std::string(line.substr(sp + 1)));
  }
  return std::make_shared<ByteLevelBpeTokenizer>(vocab_json.parent_path().filename().string(),
                                                 std::move(vocab), std::move(merges));
}

std::shared_ptr<ByteLevelBpeTokenizer> ByteLevelBpeTokenizer::builtin_toy() {
  static const std::shared_ptr<ByteLevelBpeTokenizer> toy = [] {
    std::vector<std::string> vocab{"<s>", "<pad>", "</s>", "<unk>"};
    for (int b = 0; b < 256; ++b) {
      std::string sym;
      utf8::append(sym, byte_table().to_cp[b]);
      vocab.push_back(sym);
    }
    std::vector<std::pair<std::string, std::string>> merges{
        {"h", "o"}, {"ho", "p"}, {"hop", "e"}, {"\xC4\xA0", "hope"}};
    for (const auto& [a, b] : merges) vocab.push_back(a + b);
    return std::make_shared<ByteLevelBpeTokenizer>(std::string(kBuiltinToyTokenizer),
                                                   std::move(vocab), std::move(merges));
  }();
  return toy;
}

std::vector<std::string> ByteLevelBpeTokenizer::pre_tokenize(std::string_view text) {
  const std::u32string cps = utf8::decode(text);
  const std::size_t n = cps.size();
  std::vector<std::string> out;

  const auto emit = [&](std::size_t b, std::size_t e) {
    out.push_back(utf8::encode(std::u32string_view(cps.data() + b, e - b)));
  };
  const auto run_end = [&](std::size_t from, CharClass cls) {
    while (from < n && classify(cps[from]) == cls) ++from;
    return from;
  };

  std::size_t i = 0;
  while (i < n) {
    const char32_t c = cps[i];
    if (c == '\'' && i + 1 < n) {
      static constexpr std::array<std::u32string_view, 7> kSuffixes{U"s", U"t", U"re", U"ve",
                                                                    U"m", U"ll", U"d"};
      bool matched = false;
      for (auto suf : kSuffixes) {
        if (i + 1 + suf.size() <= n && std::u32string_view(cps.data() + i + 1, suf.size()) == suf) {
          emit(i, i + 1 + suf.size());
          i += 1 + suf.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    const CharClass cls = classify(c);
    if (c == ' ' && i + 1 < n && classify(cps[i + 1]) != CharClass::Space) {
      const std::size_t e = run_end(i + 1, classify(cps[i + 1]));
      emit(i, e);
      i = e;
      continue;
    }
    if (cls != CharClass::Space) {
      const std::size_t e = run_end(i, cls);
      emit(i, e);
      i = e;
      continue;
    }
    const std::size_t e = run_end(i, CharClass::Space);
    if (e == n || e - i == 1) {
      emit(i, e);
      i = e;
    } else {
      // Leave the last space to prefix the following word.
      emit(i, e - 1);
      i = e - 1;
    }
  }
  return out;
}

std::vector<std::string> ByteLevelBpeTokenizer::bpe(const std::string& word) const {
  // `word` is in the printable byte alphabet; start from single code points.
  std::vector<std::string> parts;
  for (char32_t cp : utf8::decode(word)) {
    std::string s;
    utf8::append(s, cp);
    parts.push_back(std::move(s));
  }
  while (parts.size() > 1) {
    int best_rank = INT_MAX;
    std::size_t best = 0;
    for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
      auto it = merge_rank_.find(merge_key(parts[k], parts[k + 1]));
      if (it != merge_rank_.end() && it->second < best_rank) {
        best_rank = it->second;
        best = k;
      }
    }
    if (best_rank == INT_MAX) break;
    const std::string a = parts[best];
    const std::string b = parts[best + 1];
    std::vector<std::string> merged;
    merged.reserve(parts.size());
    for (std::size_t k = 0; k < parts.size();) {
      if (k + 1 < parts.size() && parts[k] == a && parts[k + 1] == b) {
        merged.push_back(a + b);
        k += 2;
      } else {
        merged.push_back(std::move(parts[k]));
        ++k;
      }
    }
    parts = std::move(merged);
  }
  return parts;
}

std::vector<TokenId> ByteLevelBpeTokenizer::tokenize(std::string_view text) const {
  if (auto bad = utf8::first_invalid(text)) {
    throw TokenizerError("invalid UTF-8 at byte offset " + std::to_string(*bad));
  }
  const auto& table = byte_table();
  std::vector<TokenId> ids;
  for (const std::string& piece : pre_tokenize(text)) {
    std::string mapped;
    for (unsigned char b : piece) utf8::append(mapped, table.to_cp[b]);
    for (const std::string& sym : bpe(mapped)) {
      auto it = token_to_id_.find(sym);
      ids.push_back(it == token_to_id_.end() ? specials().unk : it->second);
    }
  }
  return ids;
}

std::string ByteLevelBpeTokenizer::decode(std::span<const TokenId> ids) const {
  const auto& table = byte_table();
  std::string out;
  for (TokenId id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size() || is_special(id)) continue;
    for (char32_t cp : utf8::decode(id_to_token_[id])) {
      auto it = table.to_byte.find(cp);
      if (it != table.to_byte.end()) out.push_back(static_cast<char>(it->second));
    }
  }
  return out;
}

void ByteLevelBpeTokenizer::save(const fs::path& dir) const {
  fs::create_directories(dir);
  json vocab = json::object();
  for (std::size_t i = 0; i < id_to_token_.size(); ++i) vocab[id_to_token_[i]] = i;
  atomic_write(dir / "vocab.json", vocab.dump());
  std::string merges = "#version: 0.2\n";
  for (const auto& [a, b] : merges_) merges += a + " " + b + "\n";
  atomic_write(dir / "merges.txt", merges);
}

}  // namespace hope
