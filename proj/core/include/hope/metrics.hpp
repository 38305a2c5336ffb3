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

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hope/corpus.hpp"
#include "hope/kv.hpp"

namespace hope {

class MetricsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// 2x2 tally indexed (gold, predicted).
struct ConfusionMatrix {
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> counts{};

  std::size_t at(Label gold, Label pred) const noexcept {
    return counts[to_index(gold)][to_index(pred)];
  }
  std::size_t total() const noexcept;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const Label> gold, std::span<const Label> pred);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // gold count

  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

struct MetricsReport {
  std::array<ClassMetrics, kNumClasses> per_class{};  // indexed by to_index(Label)
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
  double accuracy = 0.0;
  ConfusionMatrix matrix;
  /// Ratios that were 0/0 and therefore reported as 0, e.g. "precision.hope".
  std::vector<std::string> zero_division;

  const ClassMetrics& of(Label label) const noexcept { return per_class[to_index(label)]; }
  std::size_t total() const noexcept { return matrix.total(); }

  KeyValueDoc to_key_value() const;
  std::string to_table() const;
  /// Macro precision, macro recall, macro F1 and accuracy to four decimals.
  std::string headline() const;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Per-class precision/recall/F1 with 0/0 defined as 0 (and flagged), their
/// unweighted means, support-weighted F1, and accuracy.
MetricsReport report(std::span<const Label> gold, std::span<const Label> pred);
MetricsReport report_from_confusion(const ConfusionMatrix& matrix);

struct NamedReport {
  std::string name;
  MetricsReport report;
};

/// Names ordered by macro F1 (descending), then accuracy (descending), then
/// name (ascending).
std::vector<std::string> rank_submissions(std::span<const NamedReport> reports);

}  // namespace hope
