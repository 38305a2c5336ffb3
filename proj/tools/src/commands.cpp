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
#include <chrono>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "hope/checkpoint.hpp"
#include "hope/classifier.hpp"
#include "hope/csv.hpp"
#include "hope/fileio.hpp"
#include "hope/pipeline.hpp"
#include "hope/textclean.hpp"
#include "hope/tokenizer.hpp"
#include "hopecli/commands.hpp"

namespace hopecli {

namespace {

using hope::Label;

// Only used to label error messages; the file contents decide everything else.
hope::SplitName guess_split(const fs::path& path) {
  const std::string stem = path.stem().string();
  if (stem.find("test") != std::string::npos) return hope::SplitName::Test;
  if (stem.find("dev") != std::string::npos || stem.find("val") != std::string::npos) {
    return hope::SplitName::Dev;
  }
  return hope::SplitName::Train;
}

std::string known_reference_names() {
  std::string names;
  for (const auto& r : hope::reference_counts()) {
    names += (names.empty() ? "" : ", ") + std::string(r.name);
  }
  return names;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string fixed4(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << v;
  return s.str();
}

}  // namespace

int cmd_stats(const StatsRequest& req, std::ostream& out) {
  if (req.data.empty()) throw UsageError("stats needs at least one --data file");
  if (req.expect.size() > req.data.size()) {
    throw UsageError("more --expect names than --data files");
  }
  hope::KeyValueDoc report;
  bool all_passed = true;
  for (std::size_t i = 0; i < req.data.size(); ++i) {
    const auto& path = req.data[i];
    const auto split = hope::load_split(path, guess_split(path), /*require_labels=*/false);
    const hope::ClassCounts c = hope::split_statistics(split);
    out << path.string() << "\n"
        << "  total     " << c.total << "\n"
        << "  hope      " << c.hope << "\n"
        << "  not_hope  " << c.not_hope << "\n";
    const std::string prefix = "file." + std::to_string(i) + ".";
    report.set(prefix + "path", path.string());
    report.set(prefix + "total", c.total);
    report.set(prefix + "hope", c.hope);
    report.set(prefix + "not_hope", c.not_hope);

    if (i < req.expect.size()) {
      const std::string& name = req.expect[i];
      const auto expected = hope::find_reference_counts(name);
      if (!expected) {
        throw UsageError("unknown reference '" + name + "' (known: " + known_reference_names() +
                         ")");
      }
      const auto v = hope::verify_expected_counts(c, *expected);
      report.set(prefix + "expect", name);
      report.merge(v.to_key_value(), prefix + "verify.");
      out << "  expect " << name << ": " << (v.passed ? "PASS" : "FAIL") << "\n";
      for (const auto& d : v.diffs) {
        out << "    " << d.field << ": actual " << d.actual << ", expected " << d.expected
            << "\n";
      }
      all_passed = all_passed && v.passed;
    }
  }
  report.set("status", all_passed ? "pass" : "fail");
  if (req.report) hope::atomic_write(*req.report, report.serialize());
  return all_passed ? 0 : 1;
}

int cmd_clean(const CleanRequest& req, std::ostream& out) {
  const auto split = hope::load_split(req.input, guess_split(req.input), false);
  std::vector<hope::TextInstance> cleaned;
  cleaned.reserve(split.size());
  std::vector<std::string> empty_ids;
  for (const auto& inst : split.instances()) {
    hope::CleanText c = hope::clean(inst.text);
    if (c.empty()) empty_ids.push_back(inst.id);
    cleaned.push_back({inst.id, c.value(), inst.label});
  }
  const hope::DatasetSplit result(split.name(), std::move(cleaned));
  hope::atomic_write(req.output,
                     hope::serialize_split(result, hope::csv::delimiter_for(req.output.string())));
  out << "cleaned " << result.size() << " instances; " << empty_ids.size()
      << " empty after cleaning\n";
  if (req.show_empty) {
    for (const auto& id : empty_ids) out << "  empty: " << id << "\n";
  }
  return 0;
}

int cmd_train(RunConfig config, std::ostream& out) {
  config.finalize_for_training();
  const auto& params = config.params;

  const auto train_split = hope::load_split(config.train_path, hope::SplitName::Train, true);
  const auto dev_split = hope::load_split(config.dev_path, hope::SplitName::Dev, true);
  const auto tokenizer = hope::load_tokenizer(config.tokenizer == hope::kBuiltinToyTokenizer
                                                  ? fs::path(config.tokenizer)
                                                  : hope::resolve_model_source(config.tokenizer));
  const hope::BackboneSource source =
      config.backbone == "toy"
          ? hope::BackboneSource::toy(tokenizer->vocab_size(), config.toy_max_positions)
          : hope::BackboneSource::pretrained(hope::resolve_model_source(config.backbone));
  auto model = hope::build_model<float>(params, source);

  fs::create_directories(config.output_dir);
  const fs::path checkpoint_dir = config.output_dir / "checkpoint";
  const fs::path partial = config.output_dir / ".checkpoint.partial";
  fs::remove_all(partial);

  hope::TrainOptions opts;
  opts.checkpoint_dir = partial;
  opts.grad_clip = config.grad_clip;
  opts.weight_decay = config.weight_decay;
  opts.patience = config.patience;
  opts.stop_at_perfect_train = config.stop_at_perfect_train;
  opts.eval_train_each_epoch = config.stop_at_perfect_train;
  opts.freeze_backbone = config.freeze_backbone;
  opts.on_epoch = [&](const hope::EpochRecord& e) {
    out << "epoch " << e.epoch << ": train_loss " << hope::format_double(e.train_loss)
        << "  dev_macro_f1 " << fixed4(e.dev_macro_f1) << "  dev_accuracy "
        << fixed4(e.dev_accuracy);
    if (e.train_accuracy) out << "  train_accuracy " << fixed4(*e.train_accuracy);
    out << "\n" << std::flush;
  };

  hope::TrainRun run;
  try {
    run = hope::train(*model, *tokenizer, train_split, dev_split, opts);
    hope::commit_directory(partial, checkpoint_dir);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(partial, ec);
    throw;
  }

  std::string epoch_log;
  const std::vector<std::string> header{"epoch", "train_loss", "dev_macro_f1", "dev_accuracy",
                                        "train_accuracy"};
  hope::csv::append_record(epoch_log, header, '\t');
  for (const auto& e : run.epoch_log) {
    const std::vector<std::string> row{
        std::to_string(e.epoch), hope::format_double(e.train_loss),
        hope::format_double(e.dev_macro_f1), hope::format_double(e.dev_accuracy),
        e.train_accuracy ? hope::format_double(*e.train_accuracy) : std::string()};
    hope::csv::append_record(epoch_log, row, '\t');
  }
  hope::atomic_write(config.output_dir / "epoch_log.tsv", epoch_log);

  hope::KeyValueDoc m;
  m.set("manifest_version", 1);
  m.set("created_at", utc_timestamp());
  if (config.language) m.set("language", to_string(*config.language));
  m.set("preset", config.preset_name.empty() ? std::string("custom") : config.preset_name);
  m.merge(params.to_key_value(), "params.");
  m.set("seed", std::to_string(params.seed));
  m.set("device", config.device);
  m.set("dtype", "float32");
  m.set("backbone", config.backbone);
  m.set("tokenizer", config.tokenizer);
  m.set("tokenizer.vocab_size", tokenizer->vocab_size());
  m.set("max_input_length", model->max_input_length());
  m.set("grad_clip", config.grad_clip);
  m.set("weight_decay", config.weight_decay);
  m.set("learning_rate_schedule", "constant");
  m.set("patience", config.patience);
  m.set("freeze_backbone", config.freeze_backbone);
  m.set("data.train.path", config.train_path.string());
  m.set("data.train.sha256", sha256_file(config.train_path));
  m.set("data.train.instances", train_split.size());
  m.set("data.dev.path", config.dev_path.string());
  m.set("data.dev.sha256", sha256_file(config.dev_path));
  m.set("data.dev.instances", dev_split.size());
  m.set("epoch_log", "epoch_log.tsv");
  m.merge(run.to_key_value(), "run.");
  m.set("best_epoch", run.best_epoch);
  m.set("train_accuracy", run.final_train_accuracy);
  m.set("checkpoint", "checkpoint");
  m.set("checkpoint.weights_sha256", sha256_file(checkpoint_dir / "weights.bin"));
  hope::atomic_write(config.output_dir / "manifest.txt", m.serialize());

  out << "best epoch " << run.best_epoch << " (dev macro F1 " << fixed4(run.best_dev_macro_f1)
      << "); train accuracy " << fixed4(run.final_train_accuracy) << "\n";
  if (run.stop_reason != "completed") out << "stopped early: " << run.stop_reason << "\n";
  out << "wrote " << (config.output_dir / "manifest.txt").string() << "\n";
  return 0;
}

int cmd_predict(const PredictRequest& req, std::ostream& out) {
  auto loaded = hope::load_checkpoint<float>(req.checkpoint, req.expected);
  const auto split = hope::load_split(req.test, hope::SplitName::Test, false);
  const std::size_t batch = req.batch_size.value_or(loaded.model->params().batch_size);
  if (batch == 0) throw UsageError("--batch-size must be positive");
  const auto labels = hope::predict_split(*loaded.model, *loaded.tokenizer, split, batch);

  const char delim = hope::csv::delimiter_for(req.output.string());
  std::string text;
  hope::csv::append_record(text, std::vector<std::string>{"id", "label"}, delim);
  for (std::size_t i = 0; i < split.size(); ++i) {
    hope::csv::append_record(
        text, std::vector<std::string>{split[i].id, std::string(hope::to_string(labels[i]))},
        delim);
  }
  hope::atomic_write(req.output, text);
  out << "wrote " << split.size() << " predictions to " << req.output.string() << "\n";
  return 0;
}

std::vector<std::pair<std::string, Label>> read_labels(const fs::path& path) {
  const std::string src = path.string();
  if (!fs::exists(path)) throw hope::MissingFileError(src + ": file not found");
  const auto rows = hope::csv::parse(hope::read_file(path), hope::csv::delimiter_for(src));
  if (rows.empty()) throw hope::MalformedRowError(src + ": file is empty");
  const auto& header = rows.front().fields;
  std::optional<std::size_t> id_col, label_col;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (hope::trim(header[k]) == "id") id_col = k;
    if (hope::trim(header[k]) == "label") label_col = k;
  }
  if (!id_col || !label_col) {
    throw hope::MalformedRowError(src + ": header must contain 'id' and 'label' columns");
  }
  std::vector<std::pair<std::string, Label>> out;
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (f.size() != header.size()) {
      throw hope::MalformedRowError(src + ": line " + std::to_string(rows[r].line) + ": expected " +
                                    std::to_string(header.size()) + " columns, found " +
                                    std::to_string(f.size()));
    }
    const std::string& id = f[*id_col];
    if (!seen.insert(id).second) throw hope::DuplicateIdError(id);
    if (hope::trim(f[*label_col]).empty()) {
      throw hope::MissingLabelError(src + ": instance " + id + " has no label");
    }
    const auto label = hope::parse_label(f[*label_col]);
    if (!label) throw hope::UnknownLabelError(id, f[*label_col]);
    out.emplace_back(id, *label);
  }
  return out;
}

hope::MetricsReport score(const std::vector<std::pair<std::string, Label>>& gold,
                          const std::vector<std::pair<std::string, Label>>& pred) {
  std::unordered_map<std::string, Label> by_id(pred.begin(), pred.end());
  std::vector<Label> g, p;
  g.reserve(gold.size());
  p.reserve(gold.size());
  std::vector<std::string> missing;
  std::unordered_set<std::string> gold_ids;
  for (const auto& [id, label] : gold) {
    gold_ids.insert(id);
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      missing.push_back(id);
      continue;
    }
    g.push_back(label);
    p.push_back(it->second);
  }
  std::vector<std::string> extra;
  for (const auto& [id, label] : pred) {
    if (!gold_ids.contains(id)) extra.push_back(id);
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "prediction ids do not match gold ids";
    const auto list = [&](const char* what, const std::vector<std::string>& ids) {
      if (ids.empty()) return;
      msg += std::string("; ") + what + " (" + std::to_string(ids.size()) + "):";
      for (const auto& id : ids) msg += " " + id;
    };
    list("missing from predictions", missing);
    list("not in gold", extra);
    throw UsageError(msg);
  }
  return hope::report(g, p);
}

int cmd_evaluate(const EvaluateRequest& req, std::ostream& out) {
  if (req.predictions.empty()) throw UsageError("evaluate needs at least one --pred file");
  const auto gold = read_labels(req.gold);
  std::vector<hope::NamedReport> reports;
  for (const auto& path : req.predictions) {
    reports.push_back({path.string(), score(gold, read_labels(path))});
  }

  if (reports.size() == 1) {
    const auto& r = reports.front().report;
    out << r.to_table() << "\n" << r.headline();
  } else {
    const auto order = hope::rank_submissions(reports);
    out << "rank  macro_f1  accuracy  submission\n";
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto it = std::find_if(reports.begin(), reports.end(),
                                   [&](const hope::NamedReport& n) { return n.name == order[i]; });
      out << std::setw(4) << i + 1 << "  " << fixed4(it->report.macro_f1) << "    "
          << fixed4(it->report.accuracy) << "    " << it->name << "\n";
    }
  }

  if (req.report) {
    hope::KeyValueDoc doc;
    doc.set("gold", req.gold.string());
    if (reports.size() == 1) {
      doc.set("pred", reports.front().name);
      doc.merge(reports.front().report.to_key_value());
    } else {
      for (std::size_t i = 0; i < reports.size(); ++i) {
        const std::string prefix = "submission." + std::to_string(i) + ".";
        doc.set(prefix + "pred", reports[i].name);
        doc.merge(reports[i].report.to_key_value(), prefix);
      }
    }
    hope::atomic_write(*req.report, doc.serialize());
  }
  return 0;
}

}  // namespace hopecli
