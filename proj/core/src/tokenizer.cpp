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

#include "hope/tokenizer.hpp"

#include <cstdlib>
#include <fstream>

#include "json.hpp"

#include "hope/fileio.hpp"

namespace hope {
namespace fs = std::filesystem;
using json = nlohmann::json;

Tokenizer::Tokenizer(std::string model_id, std::size_t vocab_size, SpecialTokens specials)
    : model_id_(std::move(model_id)), vocab_size_(vocab_size), specials_(specials) {
  for (TokenId id : {specials.bos, specials.pad, specials.eos, specials.unk}) {
    if (id < 0 || static_cast<std::size_t>(id) >= vocab_size) {
      throw TokenizerError(model_id_ + ": special token id " + std::to_string(id) +
                           " outside vocabulary of size " + std::to_string(vocab_size));
    }
  }
}

bool Tokenizer::is_special(TokenId id) const noexcept {
  return id == specials_.bos || id == specials_.pad || id == specials_.eos || id == specials_.unk;
}

namespace {

json parse_json_file(const fs::path& p) {
  try {
    return json::parse(read_file(p));
  } catch (const json::exception& e) {
    throw TokenizerError(p.string() + ": " + e.what());
  } catch (const IoError& e) {
    throw TokenizerError(e.what());
  }
}

SpecialTokens find_specials(const std::unordered_map<std::string, TokenId>& lookup,
                            const std::string& where) {
  const auto get = [&](const char* name) {
    auto it = lookup.find(name);
    if (it == lookup.end()) {
      throw TokenizerError(where + ": vocabulary has no '" + std::string(name) + "' token");
    }
    return it->second;
  };
  return SpecialTokens{get("<s>"), get("<pad>"), get("</s>"), get("<unk>")};
}

TokenizerHandle from_tokenizer_json(const fs::path& file, std::string model_id) {
  const json doc = parse_json_file(file);
  try {
    const json& model = doc.at("model");
    const std::string type = model.value("type", "");
    if (type == "BPE") {
      std::vector<std::string> vocab;
      for (const auto& [tok, id] : model.at("vocab").items()) {
        const auto idx = id.get<std::size_t>();
        if (vocab.size() <= idx) vocab.resize(idx + 1);
        vocab[idx] = tok;
      }
      for (const auto& added : doc.value("added_tokens", json::array())) {
        const auto idx = added.at("id").get<std::size_t>();
        if (vocab.size() <= idx) vocab.resize(idx + 1);
        vocab[idx] = added.at("content").get<std::string>();
      }
      std::vector<std::pair<std::string, std::string>> merges;
      for (const auto& m : model.at("merges")) {
        if (m.is_array()) {
          merges.emplace_back(m.at(0).get<std::string>(), m.at(1).get<std::string>());
        } else {
          const auto s = m.get<std::string>();
          const auto sp = s.find(' ');
          if (sp == std::string::npos) throw TokenizerError(file.string() + ": bad merge '" + s + "'");
          merges.emplace_back(s.substr(0, sp), s.substr(sp + 1));
        }
      }
      return std::make_shared<ByteLevelBpeTokenizer>(std::move(model_id), std::move(vocab),
                                                     std::move(merges));
    }
    if (type == "Unigram") {
      std::vector<UnigramTokenizer::Piece> pieces;
      std::unordered_map<std::string, TokenId> lookup;
      for (const auto& entry : model.at("vocab")) {
        pieces.push_back({entry.at(0).get<std::string>(), entry.at(1).get<double>()});
        lookup.emplace(pieces.back().text, static_cast<TokenId>(pieces.size() - 1));
      }
      for (const auto& added : doc.value("added_tokens", json::array())) {
        lookup[added.at("content").get<std::string>()] = added.at("id").get<TokenId>();
      }
      const auto unk = model.at("unk_id").get<TokenId>();
      const SpecialTokens specials = find_specials(lookup, file.string());
      return std::make_shared<UnigramTokenizer>(std::move(model_id), std::move(pieces), unk,
                                                specials);
    }
    throw TokenizerError(file.string() + ": unsupported tokenizer model type '" + type + "'");
  } catch (const json::exception& e) {
    throw TokenizerError(file.string() + ": " + e.what());
  }
}

}  // namespace

TokenizerHandle load_tokenizer(const fs::path& location) {
  if (location == kBuiltinToyTokenizer) return ByteLevelBpeTokenizer::builtin_toy();

  if (fs::is_regular_file(location)) {
    return from_tokenizer_json(location, location.parent_path().filename().string());
  }
  const fs::path dir = resolve_model_source(location.string());
  const std::string model_id = fs::path(dir).filename().string();
  if (fs::is_regular_file(dir / "tokenizer.json")) {
    return from_tokenizer_json(dir / "tokenizer.json", model_id);
  }
  if (fs::is_regular_file(dir / "vocab.json") && fs::is_regular_file(dir / "merges.txt")) {
    return ByteLevelBpeTokenizer::from_files(dir / "vocab.json", dir / "merges.txt");
  }
  throw TokenizerError(dir.string() +
                       ": no tokenizer.json or vocab.json + merges.txt found");
}

fs::path resolve_model_source(std::string_view location) {
  const fs::path direct(location);
  if (fs::is_directory(direct)) return direct;

  if (location.empty() || location.find("..") != std::string_view::npos) {
    throw TokenizerError("model location not found: '" + std::string(location) + "'");
  }
  // Hub cache layout: <hub>/models--org--name/snapshots/<revision>/
  std::string cache_name = "models--";
  for (char c : location) {
    if (c == '/') {
      cache_name += "--";
    } else {
      cache_name.push_back(c);
    }
  }

  std::vector<fs::path> hubs;
  if (const char* v = std::getenv("HF_HUB_CACHE")) hubs.emplace_back(v);
  if (const char* v = std::getenv("HF_HOME")) hubs.emplace_back(fs::path(v) / "hub");
  if (const char* v = std::getenv("HOME")) hubs.emplace_back(fs::path(v) / ".cache/huggingface/hub");

  for (const auto& hub : hubs) {
    const fs::path root = hub / cache_name;
    if (!fs::is_directory(root / "snapshots")) continue;
    std::ifstream ref(root / "refs" / "main");
    std::string rev;
    if (ref && std::getline(ref, rev) && fs::is_directory(root / "snapshots" / rev)) {
      return root / "snapshots" / rev;
    }
    for (const auto& entry : fs::directory_iterator(root / "snapshots")) {
      if (entry.is_directory()) return entry.path();
    }
  }
  throw TokenizerError("model location not found: '" + std::string(location) +
                       "' is neither a directory nor a cached hub model");
}

}  // namespace hope
