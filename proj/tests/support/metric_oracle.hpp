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
#include <vector>

// Metric definitions evaluated by counting, written without reference to the
// library so the two can be compared.
namespace hope::test::oracle {

struct Scores {
  double precision[2];
  double recall[2];
  double f1[2];
  double support[2];
  double macro_precision;
  double macro_recall;
  double macro_f1;
  double weighted_f1;
  double accuracy;
};

/// Labels are 0/1 integers. Undefined ratios count as 0.
inline Scores brute_force(const std::vector<int>& gold, const std::vector<int>& pred) {
  Scores s{};
  const double n = static_cast<double>(gold.size());
  double correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) correct += gold[i] == pred[i] ? 1 : 0;
  s.accuracy = correct / n;
  for (int c = 0; c < 2; ++c) {
    double predicted_c = 0, gold_c = 0, both = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (pred[i] == c) predicted_c += 1;
      if (gold[i] == c) gold_c += 1;
      if (pred[i] == c && gold[i] == c) both += 1;
    }
    s.precision[c] = predicted_c > 0 ? both / predicted_c : 0.0;
    s.recall[c] = gold_c > 0 ? both / gold_c : 0.0;
    const double denom = s.precision[c] + s.recall[c];
    s.f1[c] = denom > 0 ? 2 * s.precision[c] * s.recall[c] / denom : 0.0;
    s.support[c] = gold_c;
  }
  s.macro_precision = (s.precision[0] + s.precision[1]) / 2;
  s.macro_recall = (s.recall[0] + s.recall[1]) / 2;
  s.macro_f1 = (s.f1[0] + s.f1[1]) / 2;
  s.weighted_f1 = (s.f1[0] * s.support[0] + s.f1[1] * s.support[1]) / n;
  return s;
}

}  // namespace hope::test::oracle
