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
#include <limits>

#include "json.hpp"

#include "hope/fileio.hpp"
#include "hope/tokenizer.hpp"
#include "hope/utf8.hpp"

namespace hope {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr std::string_view kMetaspace = "\xE2\x96\x81";  // U+2581
constexpr double kUnkPenalty = 10.0;

}  // namespace

UnigramTokenizer::UnigramTokenizer(std::string model_id, std::vector<Piece> pieces, TokenId unk_id,
                                   SpecialTokens specials)
    : Tokenizer(std::move(model_id), pieces.size(), specials),
      pieces_(std::move(pieces)),
      unk_id_(unk_id) {
  if (unk_id_ < 0 || static_cast<std::size_t>(unk_id_) >= pieces_.size()) {
    throw TokenizerError(this->model_id() + ": unk_id out of range");
  }
  double min_score = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto id = static_cast<TokenId>(i);
    if (is_special(id)) continue;
    lookup_.emplace(pieces_[i].text, id);
    max_piece_bytes_ = std::max(max_piece_bytes_, pieces_[i].text.size());
    min_score = std::min(min_score, pieces_[i].score);
  }
  if (min_score != std::numeric_limits<double>::max()) unk_score_ = min_score - kUnkPenalty;
}

void UnigramTokenizer::viterbi(std::string_view word, std::vector<TokenId>& out) const {
  // Lattice over byte offsets that start a code point.
  const std::size_t n = word.size();
  const auto is_boundary = [&](std::size_t i) {
    return i == n || (static_cast<unsigned char>(word[i]) & 0xC0) != 0x80;
  };
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  std::vector<double> best(n + 1, kNone);
  std::vector<std::size_t> back(n + 1, 0);
  std::vector<TokenId> via(n + 1, unk_id_);
  best[0] = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    if (best[i] == kNone || !is_boundary(i)) continue;
    bool single_char_covered = false;
    std::size_t char_end = i + 1;
    while (!is_boundary(char_end)) ++char_end;
    for (std::size_t j = i + 1; j <= n && j - i <= max_piece_bytes_; ++j) {
      if (!is_boundary(j)) continue;
      auto it = lookup_.find(std::string(word.substr(i, j - i)));
      if (it == lookup_.end()) continue;
      if (j == char_end) single_char_covered = true;
      const double s = best[i] + pieces_[it->second].score;
      if (s > best[j]) {
        best[j] = s;
        back[j] = i;
        via[j] = it->second;
      }
    }
    if (!single_char_covered) {
      const double s = best[i] + unk_score_;
      if (s > best[char_end]) {
        best[char_end] = s;
        back[char_end] = i;
        via[char_end] = unk_id_;
      }
    }
  }

  std::vector<TokenId> rev;
  for (std::size_t j = n; j > 0; j = back[j]) rev.push_back(via[j]);
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
    // Consecutive unknown characters collapse into one unk token.
    if (*it == unk_id_ && !out.empty() && out.back() == unk_id_) continue;
    out.push_back(*it);
  }
}

std::vector<TokenId> UnigramTokenizer::tokenize(std::string_view text) const {
  if (auto bad = utf8::first_invalid(text)) {
    throw TokenizerError("invalid UTF-8 at byte offset " + std::to_string(*bad));
  }
  std::vector<TokenId> ids;
  std::size_t i = 0;
  const std::u32string cps = utf8::decode(text);
  while (i < cps.size()) {
    while (i < cps.size() && utf8::is_space(cps[i])) ++i;
    if (i == cps.size()) break;
    std::size_t j = i;
    while (j < cps.size() && !utf8::is_space(cps[j])) ++j;
    std::string word(kMetaspace);
    word += utf8::encode(std::u32string_view(cps.data() + i, j - i));
    viterbi(word, ids);
    i = j;
  }
  return ids;
}

std::string UnigramTokenizer::decode(std::span<const TokenId> ids) const {
  std::string joined;
  for (TokenId id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= pieces_.size() || is_special(id)) continue;
    joined += pieces_[id].text;
  }
  std::string out;
  for (std::size_t k = 0; k < joined.size();) {
    if (std::string_view(joined).substr(k, kMetaspace.size()) == kMetaspace) {
      out.push_back(' ');
      k += kMetaspace.size();
    } else {
      out.push_back(joined[k++]);
    }
  }
  if (!out.empty() && out.front() == ' ') out.erase(out.begin());
  return out;
}

void UnigramTokenizer::save(const fs::path& dir) const {
  fs::create_directories(dir);
  json vocab = json::array();
  for (const auto& p : pieces_) vocab.push_back(json::array({p.text, p.score}));
  json added = json::array();
  const auto& sp = specials();
  for (TokenId id : {sp.bos, sp.pad, sp.eos, sp.unk}) {
    added.push_back({{"id", id}, {"content", pieces_[id].text}, {"special", true}});
  }
  json doc = {
      {"version", "1.0"},
      {"added_tokens", added},
      {"pre_tokenizer", {{"type", "Metaspace"}, {"replacement", std::string(kMetaspace)}}},
      {"model", {{"type", "Unigram"}, {"unk_id", unk_id_}, {"vocab", vocab}}},
  };
  atomic_write(dir / "tokenizer.json", doc.dump());
}

}  // namespace hope
