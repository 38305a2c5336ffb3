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

#include <CLI11.hpp>

#include <exception>
#include <ostream>

#include "hopecli/commands.hpp"

namespace hopecli {

namespace {

struct TrainFlags {
  std::optional<fs::path> config;
  std::optional<std::string> preset;
  std::optional<std::string> language;
  std::optional<fs::path> train;
  std::optional<fs::path> dev;
  std::optional<fs::path> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> backbone;
  std::optional<std::string> tokenizer;
  std::optional<std::string> device;
  std::vector<std::string> overrides;
};

RunConfig build_run_config(const TrainFlags& f) {
  hope::KeyValueDoc doc;
  fs::path base;
  if (f.config) {
    doc = hope::KeyValueDoc::load(*f.config);
    base = f.config->parent_path();
  }
  if (f.language) doc.set("language", *f.language);
  if (f.preset) doc.set("preset", *f.preset);
  RunConfig cfg = RunConfig::from_doc(doc, base);
  if (f.train) cfg.train_path = *f.train;
  if (f.dev) cfg.dev_path = *f.dev;
  if (f.output_dir) cfg.output_dir = *f.output_dir;
  if (f.seed) cfg.params.seed = *f.seed;
  if (f.backbone) cfg.backbone = *f.backbone;
  if (f.tokenizer) cfg.tokenizer = *f.tokenizer;
  if (f.device) cfg.device = *f.device;
  for (const auto& kv : f.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
    cfg.set(hope::trim(std::string_view(kv).substr(0, eq)),
            std::string_view(kv).substr(eq + 1));
  }
  return cfg;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hope speech classification toolkit", "hopeclf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hopeclf 0.1.0");

  StatsRequest stats;
  auto* stats_cmd = app.add_subcommand("stats", "Print class counts and verify them");
  stats_cmd->add_option("--data", stats.data, "Corpus file (repeatable)")->required();
  stats_cmd->add_option("--expect", stats.expect,
                        "Reference name checked against the --data file at the same position");
  stats_cmd->add_option("--report", stats.report, "Write a key-value report here");

  CleanRequest clean;
  auto* clean_cmd = app.add_subcommand("clean", "Write a cleaned copy of a corpus file");
  clean_cmd->add_option("--input", clean.input, "Corpus file")->required();
  clean_cmd->add_option("--output", clean.output, "Destination file")->required();
  clean_cmd->add_flag("--show-empty", clean.show_empty, "List ids that clean to empty text");

  TrainFlags tf;
  auto* train_cmd = app.add_subcommand("train", "Fine-tune a classifier");
  train_cmd->add_option("--config", tf.config, "Run config file (key = value)");
  train_cmd->add_option("--preset", tf.preset, "Hyperparameter preset name");
  train_cmd->add_option("--language", tf.language, "english or german");
  train_cmd->add_option("--train", tf.train, "Labeled train file");
  train_cmd->add_option("--dev", tf.dev, "Labeled dev file");
  train_cmd->add_option("--output-dir", tf.output_dir,
                        std::string("Run directory (default: $") + kOutputDirEnv + ")");
  train_cmd->add_option("--seed", tf.seed, "Run seed");
  train_cmd->add_option("--backbone", tf.backbone, "'toy' or a pretrained model directory");
  train_cmd->add_option("--tokenizer", tf.tokenizer, "Tokenizer location or builtin:toy");
  train_cmd->add_option("--device", tf.device, "cpu or accelerator");
  train_cmd->add_option("--set", tf.overrides, "Override one setting, key=value (repeatable)");

  PredictRequest pred;
  std::optional<fs::path> pred_config;
  std::optional<std::string> pred_preset;
  auto* predict_cmd = app.add_subcommand("predict", "Write an id,label submission file");
  predict_cmd->add_option("--checkpoint", pred.checkpoint, "Checkpoint directory")->required();
  predict_cmd->add_option("--test", pred.test, "Test corpus file")->required();
  predict_cmd->add_option("--output", pred.output, "Submission file")->required();
  predict_cmd->add_option("--batch-size", pred.batch_size, "Inference batch size");
  predict_cmd->add_option("--config", pred_config, "Check the checkpoint against this config");
  predict_cmd->add_option("--preset", pred_preset, "Check the checkpoint against this preset");

  EvaluateRequest eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score submissions against gold labels");
  eval_cmd->add_option("--gold", eval.gold, "Gold file with id and label columns")->required();
  eval_cmd->add_option("--pred", eval.predictions, "Submission file (repeatable)")->required();
  eval_cmd->add_option("--report", eval.report, "Write a key-value report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (stats_cmd->parsed()) return cmd_stats(stats, out);
    if (clean_cmd->parsed()) return cmd_clean(clean, out);
    if (train_cmd->parsed()) return cmd_train(build_run_config(tf), out);
    if (predict_cmd->parsed()) {
      if (pred_config || pred_preset) {
        TrainFlags f;
        f.config = pred_config;
        f.preset = pred_preset;
        pred.expected = build_run_config(f).params;
      }
      return cmd_predict(pred, out);
    }
    if (eval_cmd->parsed()) return cmd_evaluate(eval, out);
  } catch (const std::exception& e) {
    err << "hopeclf: error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace hopecli
