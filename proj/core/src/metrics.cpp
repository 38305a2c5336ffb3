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

#include "hope/metrics.hpp"

#include <algorithm>
#include <cstdio>

namespace hope {

std::size_t ConfusionMatrix::total() const noexcept {
  std::size_t n = 0;
  for (const auto& row : counts) {
    for (auto c : row) n += c;
  }
  return n;
}

ConfusionMatrix confusion(std::span<const Label> gold, std::span<const Label> pred) {
  if (gold.size() != pred.size()) {
    throw MetricsError("gold has " + std::to_string(gold.size()) + " labels but predictions have " +
                       std::to_string(pred.size()));
  }
  if (gold.empty()) throw MetricsError("cannot evaluate an empty label sequence");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < gold.size(); ++i) ++m.counts[to_index(gold[i])][to_index(pred[i])];
  return m;
}

namespace {

std::string_view key_name(Label l) { return l == Label::Hope ? "hope" : "not_hope"; }

}  // namespace

MetricsReport report_from_confusion(const ConfusionMatrix& m) {
  MetricsReport r;
  r.matrix = m;
  const double total = static_cast<double>(m.total());
  if (m.total() == 0) throw MetricsError("cannot evaluate an empty confusion matrix");

  const auto ratio = [&](std::size_t num, std::size_t den, Label l, const char* what) {
    if (den == 0) {
      r.zero_division.push_back(std::string(what) + "." + std::string(key_name(l)));
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };

  std::size_t correct = 0;
  for (Label l : {Label::NotHope, Label::Hope}) {
    const int c = to_index(l);
    const int o = 1 - c;
    const std::size_t tp = m.counts[c][c];
    const std::size_t fp = m.counts[o][c];
    const std::size_t fn = m.counts[c][o];
    correct += tp;
    ClassMetrics& cm = r.per_class[c];
    cm.support = tp + fn;
    cm.precision = ratio(tp, tp + fp, l, "precision");
    cm.recall = ratio(tp, tp + fn, l, "recall");
    if (cm.precision + cm.recall == 0.0) {
      r.zero_division.push_back("f1." + std::string(key_name(l)));
      cm.f1 = 0.0;
    } else {
      cm.f1 = 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall);
    }
  }
  const auto& n = r.per_class[0];
  const auto& h = r.per_class[1];
  r.macro_precision = (n.precision + h.precision) / 2.0;
  r.macro_recall = (n.recall + h.recall) / 2.0;
  r.macro_f1 = (n.f1 + h.f1) / 2.0;
  r.weighted_f1 = (n.f1 * static_cast<double>(n.support) + h.f1 * static_cast<double>(h.support)) / total;
  r.accuracy = static_cast<double>(correct) / total;
  return r;
}

MetricsReport report(std::span<const Label> gold, std::span<const Label> pred) {
  return report_from_confusion(confusion(gold, pred));
}

KeyValueDoc MetricsReport::to_key_value() const {
  KeyValueDoc d;
  d.set("total", total());
  d.set("accuracy", accuracy);
  d.set("macro_precision", macro_precision);
  d.set("macro_recall", macro_recall);
  d.set("macro_f1", macro_f1);
  d.set("weighted_f1", weighted_f1);
  for (Label l : {Label::NotHope, Label::Hope}) {
    const std::string p = "class." + std::string(key_name(l)) + ".";
    const ClassMetrics& c = of(l);
    d.set(p + "precision", c.precision);
    d.set(p + "recall", c.recall);
    d.set(p + "f1", c.f1);
    d.set(p + "support", c.support);
  }
  for (Label g : {Label::NotHope, Label::Hope}) {
    for (Label pr : {Label::NotHope, Label::Hope}) {
      d.set("confusion." + std::string(key_name(g)) + "." + std::string(key_name(pr)),
            matrix.at(g, pr));
    }
  }
  std::string flags;
  for (const auto& f : zero_division) flags += (flags.empty() ? "" : ",") + f;
  d.set("zero_division", flags);
  return d;
}

std::string MetricsReport::to_table() const {
  char line[160];
  std::string out;
  std::snprintf(line, sizeof line, "%-14s %10s %10s %10s %10s\n", "", "precision", "recall",
                "f1-score", "support");
  out += line;
  for (Label l : {Label::NotHope, Label::Hope}) {
    const ClassMetrics& c = of(l);
    std::snprintf(line, sizeof line, "%-14s %10.4f %10.4f %10.4f %10zu\n",
                  std::string(to_string(l)).c_str(), c.precision, c.recall, c.f1, c.support);
    out += line;
  }
  out += "\n";
  std::snprintf(line, sizeof line, "%-14s %10s %10s %10.4f %10zu\n", "accuracy", "", "",
                accuracy, total());
  out += line;
  std::snprintf(line, sizeof line, "%-14s %10.4f %10.4f %10.4f %10zu\n", "macro avg",
                macro_precision, macro_recall, macro_f1, total());
  out += line;
  std::snprintf(line, sizeof line, "%-14s %10s %10s %10.4f %10zu\n", "weighted avg", "", "",
                weighted_f1, total());
  out += line;
  out += "\nconfusion (rows = gold, columns = predicted)\n";
  std::snprintf(line, sizeof line, "%-14s %10s %10s\n", "", "Not Hope", "Hope");
  out += line;
  for (Label g : {Label::NotHope, Label::Hope}) {
    std::snprintf(line, sizeof line, "%-14s %10zu %10zu\n", std::string(to_string(g)).c_str(),
                  matrix.at(g, Label::NotHope), matrix.at(g, Label::Hope));
    out += line;
  }
  if (!zero_division.empty()) {
    out += "\nundefined ratios reported as 0:";
    for (const auto& f : zero_division) out += " " + f;
    out += "\n";
  }
  return out;
}

std::string MetricsReport::headline() const {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "macro_precision %.4f\nmacro_recall %.4f\nmacro_f1 %.4f\naccuracy %.4f\n",
                macro_precision, macro_recall, macro_f1, accuracy);
  return buf;
}

std::vector<std::string> rank_submissions(std::span<const NamedReport> reports) {
  std::vector<const NamedReport*> order;
  order.reserve(reports.size());
  for (const auto& r : reports) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](const NamedReport* a, const NamedReport* b) {
    if (a->report.macro_f1 != b->report.macro_f1) return a->report.macro_f1 > b->report.macro_f1;
    if (a->report.accuracy != b->report.accuracy) return a->report.accuracy > b->report.accuracy;
    return a->name < b->name;
  });
  std::vector<std::string> names;
  names.reserve(order.size());
  for (const auto* r : order) names.push_back(r->name);
  return names;
}

}  // namespace hope
