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
#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hope {

using TokenId = std::int32_t;

class TokenizerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpecialTokens {
  TokenId bos = 0;
  TokenId pad = 1;
  TokenId eos = 2;
  TokenId unk = 3;
};

/// A pretrained subword vocabulary. Instances are immutable after loading and
/// may be shared across threads.
class Tokenizer {
 public:
  Tokenizer(std::string model_id, std::size_t vocab_size, SpecialTokens specials);
  virtual ~Tokenizer() = default;

  Tokenizer(const Tokenizer&) = delete;
  Tokenizer& operator=(const Tokenizer&) = delete;

  /// Subword ids without sentinels. Throws TokenizerError on invalid UTF-8.
  virtual std::vector<TokenId> tokenize(std::string_view text) const = 0;

  /// Inverse of tokenize up to normalization; special tokens are dropped.
  virtual std::string decode(std::span<const TokenId> ids) const = 0;

  /// Writes files that load_tokenizer() reads back into an equivalent tokenizer.
  virtual void save(const std::filesystem::path& dir) const = 0;

  virtual std::string_view kind() const noexcept = 0;

  const std::string& model_id() const noexcept { return model_id_; }
  std::size_t vocab_size() const noexcept { return vocab_size_; }
  const SpecialTokens& specials() const noexcept { return specials_; }
  bool is_special(TokenId id) const noexcept;

 private:
  std::string model_id_;
  std::size_t vocab_size_;
  SpecialTokens specials_;
};

using TokenizerHandle = std::shared_ptr<const Tokenizer>;

/// Byte-level BPE as used by RoBERTa / GPT-2 (vocab.json + merges.txt).
class ByteLevelBpeTokenizer final : public Tokenizer {
 public:
  ByteLevelBpeTokenizer(std::string model_id, std::vector<std::string> vocab,
                        std::vector<std::pair<std::string, std::string>> merges);

  static std::shared_ptr<ByteLevelBpeTokenizer> from_files(const std::filesystem::path& vocab_json,
                                                           const std::filesystem::path& merges_txt);

  /// The 256 byte symbols behind four sentinels, plus the merges that make
  /// "hope" and " hope" single tokens. Small enough for toy backbones.
  static std::shared_ptr<ByteLevelBpeTokenizer> builtin_toy();

  std::vector<TokenId> tokenize(std::string_view text) const override;
  std::string decode(std::span<const TokenId> ids) const override;
  void save(const std::filesystem::path& dir) const override;
  std::string_view kind() const noexcept override { return "byte-level-bpe"; }

  /// Splits text the way the GPT-2 pre-tokenizer pattern does, so merges never
  /// cross word boundaries.
  static std::vector<std::string> pre_tokenize(std::string_view text);

 private:
  std::vector<std::string> bpe(const std::string& word) const;

  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, TokenId> token_to_id_;
  std::vector<std::pair<std::string, std::string>> merges_;
  std::unordered_map<std::string, int> merge_rank_;
};

/// SentencePiece unigram model as used by XLM-RoBERTa (tokenizer.json).
/// Expects input already restricted to the cleaned alphabet, so no Unicode
/// normalization table is applied.
class UnigramTokenizer final : public Tokenizer {
 public:
  struct Piece {
    std::string text;
    double score = 0.0;
  };

  UnigramTokenizer(std::string model_id, std::vector<Piece> pieces, TokenId unk_id,
                   SpecialTokens specials);

  std::vector<TokenId> tokenize(std::string_view text) const override;
  std::string decode(std::span<const TokenId> ids) const override;
  void save(const std::filesystem::path& dir) const override;
  std::string_view kind() const noexcept override { return "unigram"; }

 private:
  void viterbi(std::string_view word, std::vector<TokenId>& out) const;

  std::vector<Piece> pieces_;
  std::unordered_map<std::string, TokenId> lookup_;
  TokenId unk_id_;
  std::size_t max_piece_bytes_ = 1;
  double unk_score_ = -10.0;
};

/// Loads from a model directory (tokenizer.json, or vocab.json + merges.txt),
/// a tokenizer.json path, or the name "builtin:toy".
TokenizerHandle load_tokenizer(const std::filesystem::path& location);

/// Maps a model location to a local directory: an existing path is returned
/// as is; otherwise `location` is treated as a hub identifier ("org/name")
/// and looked up in the local Hugging Face cache.
std::filesystem::path resolve_model_source(std::string_view location);

inline constexpr std::string_view kBuiltinToyTokenizer = "builtin:toy";

}  // namespace hope
