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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "hope/classifier.hpp"
#include "hope/fileio.hpp"
#include "hope/hyperparams.hpp"
#include "hope/tokenizer.hpp"

namespace hope::test {

inline std::filesystem::path data_dir() { return HOPE_TEST_DATA_DIR; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("hope-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Small dimensions so a forward/backward pass takes microseconds.
inline HyperParams toy_params(LossKind loss = LossKind::CrossEntropy) {
  HyperParams p = preset("english-roberta-base");
  p.hidden_size = 16;
  p.num_layers = 2;
  p.num_attention_heads = 2;
  p.intermediate_size = 32;
  p.batch_size = 4;
  p.learning_rate = 1e-3;
  p.loss = loss;
  p.seed = 7;
  return p;
}

inline TokenizerHandle toy_tokenizer() { return load_tokenizer(std::string(kBuiltinToyTokenizer)); }

template <typename T>
std::unique_ptr<SequenceClassifier<T>> toy_model(const HyperParams& p, std::size_t max_positions = 64) {
  return build_model<T>(p, BackboneSource::toy(toy_tokenizer()->vocab_size(), max_positions));
}

}  // namespace hope::test
