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
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hope/corpus.hpp"
#include "hope/hyperparams.hpp"
#include "hope/kv.hpp"
#include "hope/metrics.hpp"
#include "hope/training.hpp"

namespace hopecli {

namespace fs = std::filesystem;

/// Bad invocation: missing inputs, unknown names, conflicting options.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Environment variable consulted when no output directory is given.
inline constexpr const char* kOutputDirEnv = "HOPECLF_OUTPUT_DIR";

enum class Language { English, German };

Language parse_language(std::string_view text);
std::string_view to_string(Language lang) noexcept;
/// english -> english-roberta-base, german -> german-xlmr.
std::string_view default_preset(Language lang) noexcept;

/// Everything one training run needs, capturable in a single key-value file.
/// Hyperparameter keys in the file override the preset.
struct RunConfig {
  std::optional<Language> language;
  std::string preset_name;  // empty for fully inline parameters
  hope::HyperParams params;
  fs::path train_path;
  fs::path dev_path;
  fs::path test_path;
  fs::path output_dir;
  /// "toy" or a model directory / hub id with config.json + model.safetensors.
  std::string backbone;
  /// Defaults to the backbone directory, or builtin:toy for the toy backbone.
  std::string tokenizer;
  std::size_t toy_max_positions = 130;
  std::string device = "cpu";
  double grad_clip = 1.0;
  double weight_decay = 0.01;
  std::size_t patience = 0;
  bool stop_at_perfect_train = false;
  bool freeze_backbone = false;

  /// Relative paths in the file are resolved against its directory.
  static RunConfig load(const fs::path& path);
  static RunConfig from_doc(const hope::KeyValueDoc& doc, const fs::path& base_dir);
  /// Applies one `key = value` setting: a run key or any hyperparameter.
  void set(std::string_view key, std::string_view value);
  /// Fills the output directory from the environment when unset and checks
  /// that everything a training run needs is present.
  void finalize_for_training();
};

/// SHA-256 of a file's bytes as lowercase hex.
std::string sha256_file(const fs::path& path);

struct StatsRequest {
  std::vector<fs::path> data;
  /// Reference names matched to `data` by position; may be shorter.
  std::vector<std::string> expect;
  std::optional<fs::path> report;
};

struct CleanRequest {
  fs::path input;
  fs::path output;
  bool show_empty = false;
};

struct PredictRequest {
  fs::path checkpoint;
  fs::path test;
  fs::path output;
  std::optional<std::size_t> batch_size;
  /// When set, the checkpoint must agree with these dimensions and head.
  std::optional<hope::HyperParams> expected;
};

struct EvaluateRequest {
  fs::path gold;
  std::vector<fs::path> predictions;
  std::optional<fs::path> report;
};

/// Each returns the process exit code; errors are thrown.
int cmd_stats(const StatsRequest& req, std::ostream& out);
int cmd_clean(const CleanRequest& req, std::ostream& out);
int cmd_train(RunConfig config, std::ostream& out);
int cmd_predict(const PredictRequest& req, std::ostream& out);
int cmd_evaluate(const EvaluateRequest& req, std::ostream& out);

/// Reads `id` and `label` columns from a gold corpus or a submission file.
std::vector<std::pair<std::string, hope::Label>> read_labels(const fs::path& path);

/// Joins predictions to gold by id. Throws UsageError listing every id that
/// is missing from or unexpected in the predictions.
hope::MetricsReport score(const std::vector<std::pair<std::string, hope::Label>>& gold,
                          const std::vector<std::pair<std::string, hope::Label>>& pred);

/// Full command-line entry point. Prints errors to `err` and returns nonzero
/// instead of throwing.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hopecli
