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

#include "hope/training.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "hope/checkpoint.hpp"
#include "hope/loss.hpp"
#include "hope/metrics.hpp"
#include "hope/optimizer.hpp"
#include "hope/pipeline.hpp"

namespace hope {

std::size_t best_epoch_index(const std::vector<EpochRecord>& log) {
  if (log.empty()) throw TrainingError("epoch log is empty");
  std::size_t best = 0;
  for (std::size_t i = 1; i < log.size(); ++i) {
    if (log[i].dev_macro_f1 > log[best].dev_macro_f1) best = i;
  }
  return best;
}

KeyValueDoc TrainRun::to_key_value() const {
  KeyValueDoc d;
  d.set("epochs_run", epoch_log.size());
  d.set("best_epoch", best_epoch);
  d.set("best_dev_macro_f1", best_dev_macro_f1);
  d.set("stop_reason", stop_reason);
  d.set("final_train_accuracy", final_train_accuracy);
  for (const auto& e : epoch_log) {
    const std::string p = "epoch." + std::to_string(e.epoch) + ".";
    d.set(p + "train_loss", e.train_loss);
    d.set(p + "dev_macro_f1", e.dev_macro_f1);
    d.set(p + "dev_accuracy", e.dev_accuracy);
    if (e.train_accuracy) d.set(p + "train_accuracy", *e.train_accuracy);
  }
  return d;
}

namespace {

template <typename T>
using Snapshot = std::unordered_map<std::string, nn::Matrix<T>>;

template <typename T>
Snapshot<T> snapshot(SequenceClassifier<T>& model) {
  Snapshot<T> s;
  model.visit_parameters(
      [&](const std::string& name, nn::Parameter<T>& p) { s.emplace(name, p.value); });
  return s;
}

template <typename T>
void restore(SequenceClassifier<T>& model, const Snapshot<T>& s) {
  model.visit_parameters(
      [&](const std::string& name, nn::Parameter<T>& p) { p.value = s.at(name); });
}

double accuracy_of(std::span<const Label> gold, std::span<const Label> pred) {
  return report(gold, pred).accuracy;
}

void require_trainable(const DatasetSplit& split, const char* role) {
  if (split.empty()) throw TrainingError(std::string(role) + " split is empty");
  if (!split.fully_labeled()) {
    for (const auto& inst : split.instances()) {
      if (!inst.label) {
        throw MissingLabelError(std::string(role) + " instance " + inst.id + " has no label");
      }
    }
  }
}

}  // namespace

template <typename T>
TrainRun train(SequenceClassifier<T>& model, const Tokenizer& tokenizer,
               const DatasetSplit& train_split, const DatasetSplit& dev_split,
               const TrainOptions& options) {
  require_trainable(train_split, "train");
  require_trainable(dev_split, "dev");
  const HyperParams& params = model.params();
  params.validate();
  if (tokenizer.vocab_size() > model.backbone_config().vocab_size) {
    throw ModelError("tokenizer vocabulary (" + std::to_string(tokenizer.vocab_size()) +
                     ") exceeds the backbone embedding table (" +
                     std::to_string(model.backbone_config().vocab_size) + ")");
  }

  const std::size_t max_len = model.max_input_length();
  const TokenId pad = tokenizer.specials().pad;
  const auto train_enc = encode_split(train_split, tokenizer, max_len);
  const auto dev_enc = encode_split(dev_split, tokenizer, max_len);
  const auto train_gold = gold_labels(train_split);
  const auto dev_gold = gold_labels(dev_split);

  OptimizerSettings settings;
  settings.learning_rate = params.learning_rate;
  settings.weight_decay = options.weight_decay;
  auto optimizer = make_optimizer<T>(params.optimizer, settings);
  const bool update_backbone = !options.freeze_backbone;
  const std::function<void(const ParameterVisitor<T>&)> visit_trainable =
      [&](const ParameterVisitor<T>& fn) {
        if (update_backbone) {
          model.visit_parameters(fn);
        } else {
          model.head().visit("classifier.", fn);
        }
      };

  model.reset_dropout_stream(params.seed);
  nn::Rng shuffle_rng = nn::Rng::derive(params.seed, nn::stream::kShuffle);
  std::vector<std::size_t> order(train_enc.size());

  TrainRun run;
  run.params = params;
  run.checkpoint_path = options.checkpoint_dir;
  Snapshot<T> best_weights;
  std::size_t since_improvement = 0;
  const bool eval_train = options.eval_train_each_epoch || options.stop_at_perfect_train;

  for (std::size_t epoch = 0; epoch < params.num_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.below(i)]);
    }

    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += params.batch_size) {
      const std::size_t n = std::min(params.batch_size, order.size() - start);
      std::vector<Encoding> batch;
      std::vector<Label> gold;
      batch.reserve(n);
      gold.reserve(n);
      for (std::size_t k = start; k < start + n; ++k) {
        batch.push_back(train_enc[order[k]]);
        gold.push_back(train_gold[order[k]]);
      }
      const auto padded = pad_batch(batch, pad);

      model.zero_grad();
      auto pass = model.forward_train(padded, /*apply_dropout=*/true);
      const ClassifierOutput out = SequenceClassifier<T>::to_output(pass.logits);
      const LossGradient lg = loss_with_gradient(out, gold, params.loss);
      if (!std::isfinite(lg.loss)) {
        std::ostringstream msg;
        msg << "non-finite loss " << lg.loss << " at epoch " << epoch << ", batch " << batches
            << " (instances";
        for (std::size_t k = start; k < start + n; ++k) msg << ' ' << train_split[order[k]].id;
        msg << "); learning_rate " << format_double(params.learning_rate);
        throw NonFiniteLossError(epoch, batches, msg.str());
      }
      nn::Matrix<T> d_logits(pass.logits.rows(), pass.logits.cols());
      for (Eigen::Index i = 0; i < d_logits.size(); ++i) {
        d_logits.data()[i] = static_cast<T>(lg.d_logits[static_cast<std::size_t>(i)]);
      }
      model.backward(pass, d_logits, update_backbone);
      if (options.grad_clip > 0.0) {
        const double norm = clip_grad_norm<T>(visit_trainable, options.grad_clip);
        if (!std::isfinite(norm)) {
          throw NonFiniteLossError(epoch, batches,
                                   "non-finite gradient norm at epoch " + std::to_string(epoch) +
                                       ", batch " + std::to_string(batches));
        }
      }
      optimizer->step(visit_trainable);
      loss_sum += lg.loss;
      ++batches;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(batches);
    const auto dev_pred = predict(infer_batched(model, dev_enc, params.batch_size, pad));
    const MetricsReport dev_report = report(dev_gold, dev_pred);
    rec.dev_macro_f1 = dev_report.macro_f1;
    rec.dev_accuracy = dev_report.accuracy;
    if (eval_train) {
      rec.train_accuracy = accuracy_of(
          train_gold, predict(infer_batched(model, train_enc, params.batch_size, pad)));
    }
    run.epoch_log.push_back(rec);
    if (options.on_epoch) options.on_epoch(rec);

    if (run.epoch_log.size() == 1 || rec.dev_macro_f1 > run.best_dev_macro_f1) {
      run.best_epoch = epoch;
      run.best_dev_macro_f1 = rec.dev_macro_f1;
      since_improvement = 0;
      if (options.restore_best) best_weights = snapshot(model);
      if (!options.checkpoint_dir.empty()) {
        save_checkpoint(model, tokenizer, options.checkpoint_dir);
      }
    } else {
      ++since_improvement;
    }

    if (options.stop_at_perfect_train && rec.train_accuracy && *rec.train_accuracy == 1.0) {
      if (epoch + 1 < params.num_epochs) {
        run.stop_reason = "train accuracy reached 1.0 after epoch " + std::to_string(epoch);
      }
      break;
    }
    if (options.patience > 0 && since_improvement >= options.patience &&
        epoch + 1 < params.num_epochs) {
      run.stop_reason = "no dev improvement for " + std::to_string(options.patience) +
                        " epochs after epoch " + std::to_string(run.best_epoch);
      break;
    }
  }

  if (options.restore_best && !best_weights.empty()) restore(model, best_weights);
  run.final_train_accuracy =
      accuracy_of(train_gold, predict(infer_batched(model, train_enc, params.batch_size, pad)));
  return run;
}

template TrainRun train(SequenceClassifier<float>&, const Tokenizer&, const DatasetSplit&,
                        const DatasetSplit&, const TrainOptions&);
template TrainRun train(SequenceClassifier<double>&, const Tokenizer&, const DatasetSplit&,
                        const DatasetSplit&, const TrainOptions&);

}  // namespace hope
