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

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>

#include "hope/classifier.hpp"
#include "hope/hyperparams.hpp"
#include "hope/tokenizer.hpp"

namespace hope {

class CheckpointError : public std::runtime_error {
 public:
  enum class Kind { Missing, Corrupt, VersionMismatch, ConfigMismatch };

  CheckpointError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

inline constexpr int kCheckpointFormatVersion = 1;

/// Checkpoint directory layout:
///   config.kv    hyperparameters, backbone metadata, format version, dtype
///   weights.bin  every named parameter tensor, followed by a checksum
///   tokenizer/   files for load_tokenizer()
///
/// The directory is staged and renamed into place, so a crash never leaves a
/// half-written checkpoint behind.
template <typename T>
void save_checkpoint(SequenceClassifier<T>& model, const Tokenizer& tokenizer,
                     const std::filesystem::path& dir);

template <typename T>
struct LoadedCheckpoint {
  std::unique_ptr<SequenceClassifier<T>> model;
  TokenizerHandle tokenizer;
};

/// With `expected` set, any disagreement between the stored and expected
/// model dimensions or head type raises ConfigMismatch naming both values.
template <typename T>
LoadedCheckpoint<T> load_checkpoint(const std::filesystem::path& dir,
                                    const std::optional<HyperParams>& expected = std::nullopt);

/// Reads only config.kv.
HyperParams read_checkpoint_params(const std::filesystem::path& dir);

}  // namespace hope
