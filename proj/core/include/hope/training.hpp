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
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hope/classifier.hpp"
#include "hope/corpus.hpp"
#include "hope/hyperparams.hpp"
#include "hope/kv.hpp"
#include "hope/tokenizer.hpp"

namespace hope {

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteLossError : public TrainingError {
 public:
  NonFiniteLossError(std::size_t epoch, std::size_t batch, const std::string& what)
      : TrainingError(what), epoch_(epoch), batch_(batch) {}
  std::size_t epoch() const noexcept { return epoch_; }
  std::size_t batch() const noexcept { return batch_; }

 private:
  std::size_t epoch_;
  std::size_t batch_;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;  // mean over the epoch's batches
  double dev_macro_f1 = 0.0;
  double dev_accuracy = 0.0;
  std::optional<double> train_accuracy;  // eval-mode, when requested

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainOptions {
  /// Best checkpoint destination; empty keeps everything in memory.
  std::filesystem::path checkpoint_dir;
  double grad_clip = 1.0;  // global L2 norm, <= 0 disables
  double weight_decay = 0.01;
  /// Stop after this many epochs without dev improvement; 0 disables.
  std::size_t patience = 0;
  bool eval_train_each_epoch = false;
  /// Stop once eval-mode train accuracy is 1.0. Implies per-epoch train eval.
  bool stop_at_perfect_train = false;
  /// Load the best epoch's weights back into the model when training ends.
  bool restore_best = true;
  /// Update only the classification head.
  bool freeze_backbone = false;
  std::function<void(const EpochRecord&)> on_epoch;
};

struct TrainRun {
  HyperParams params;
  std::vector<EpochRecord> epoch_log;
  std::size_t best_epoch = 0;
  double best_dev_macro_f1 = 0.0;
  std::filesystem::path checkpoint_path;
  /// "completed", or why training ended before num_epochs.
  std::string stop_reason = "completed";
  double final_train_accuracy = 0.0;  // eval-mode, on the weights left in the model

  KeyValueDoc to_key_value() const;
};

/// Mini-batch fine-tuning with per-epoch dev evaluation. The train order is
/// reshuffled every epoch from params.seed, and the epoch with the highest dev
/// macro F1 (earliest on ties) is kept. Hyperparameters come from the model.
template <typename T>
TrainRun train(SequenceClassifier<T>& model, const Tokenizer& tokenizer,
               const DatasetSplit& train_split, const DatasetSplit& dev_split,
               const TrainOptions& options = {});

/// Index of the maximum dev macro F1, earliest on ties. Throws on an empty log.
std::size_t best_epoch_index(const std::vector<EpochRecord>& log);

}  // namespace hope
