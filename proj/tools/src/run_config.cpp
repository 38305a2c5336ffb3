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

#include <cstdlib>

#include "hopecli/commands.hpp"

namespace hopecli {

Language parse_language(std::string_view text) {
  const auto t = hope::trim(text);
  if (t == "english" || t == "en") return Language::English;
  if (t == "german" || t == "de") return Language::German;
  throw UsageError("unknown language '" + std::string(text) + "' (expected english or german)");
}

std::string_view to_string(Language lang) noexcept {
  return lang == Language::English ? "english" : "german";
}

std::string_view default_preset(Language lang) noexcept {
  return lang == Language::English ? "english-roberta-base" : "german-xlmr";
}

namespace {

std::size_t parse_count(std::string_view value, std::string_view key) {
  const long long v = hope::parse_int(value, key);
  if (v < 0) throw UsageError(std::string(key) + " must not be negative");
  return static_cast<std::size_t>(v);
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  const std::string v(hope::trim(value));
  if (key == "language") {
    language = parse_language(v);
  } else if (key == "preset") {
    preset_name = v;
    params = hope::preset(v);
  } else if (key == "train") {
    train_path = v;
  } else if (key == "dev") {
    dev_path = v;
  } else if (key == "test") {
    test_path = v;
  } else if (key == "output_dir") {
    output_dir = v;
  } else if (key == "backbone") {
    backbone = v;
  } else if (key == "tokenizer") {
    tokenizer = v;
  } else if (key == "toy_max_positions") {
    toy_max_positions = parse_count(v, key);
  } else if (key == "device") {
    device = v;
  } else if (key == "grad_clip") {
    grad_clip = hope::parse_double(v, key);
  } else if (key == "weight_decay") {
    weight_decay = hope::parse_double(v, key);
  } else if (key == "patience") {
    patience = parse_count(v, key);
  } else if (key == "stop_at_perfect_train") {
    stop_at_perfect_train = hope::parse_bool(v, key);
  } else if (key == "freeze_backbone") {
    freeze_backbone = hope::parse_bool(v, key);
  } else {
    params.set(key, v);
  }
}

RunConfig RunConfig::load(const fs::path& path) {
  return from_doc(hope::KeyValueDoc::load(path), path.parent_path());
}

RunConfig RunConfig::from_doc(const hope::KeyValueDoc& doc, const fs::path& base) {
  RunConfig cfg;
  // Base values first so that explicit keys win regardless of file order.
  if (auto lang = doc.find("language")) cfg.set("language", *lang);
  if (auto p = doc.find("preset")) {
    cfg.set("preset", *p);
  } else if (cfg.language) {
    cfg.set("preset", default_preset(*cfg.language));
  }
  for (const auto& [key, value] : doc.entries()) {
    if (key == "language" || key == "preset") continue;
    cfg.set(key, value);
    const bool is_path = key == "train" || key == "dev" || key == "test" || key == "output_dir";
    if (is_path) {
      fs::path& p = key == "train" ? cfg.train_path
                    : key == "dev" ? cfg.dev_path
                    : key == "test" ? cfg.test_path
                                    : cfg.output_dir;
      if (p.is_relative() && !base.empty()) p = base / p;
    }
  }
  return cfg;
}

void RunConfig::finalize_for_training() {
  if (output_dir.empty()) {
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
      output_dir = env;
    } else {
      throw UsageError(std::string("no output directory: pass --output-dir or set ") +
                       kOutputDirEnv);
    }
  }
  if (device != "cpu") {
    if (device == "accelerator") {
      throw UsageError("device 'accelerator' is not available in this build; use --device cpu");
    }
    throw UsageError("unknown device '" + device + "' (expected cpu or accelerator)");
  }
  if (train_path.empty()) throw UsageError("no train file given");
  if (dev_path.empty()) throw UsageError("no dev file given");
  for (const auto* p : {&train_path, &dev_path}) {
    if (!fs::exists(*p)) throw hope::MissingFileError(p->string() + ": file not found");
  }
  if (backbone.empty()) {
    throw UsageError("no backbone given: pass --backbone toy or a pretrained model directory");
  }
  if (tokenizer.empty()) {
    tokenizer = backbone == "toy" ? std::string(hope::kBuiltinToyTokenizer) : backbone;
  }
  params.validate();
}

}  // namespace hopecli
