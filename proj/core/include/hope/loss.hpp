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

#include <span>
#include <stdexcept>
#include <vector>

#include "hope/classifier.hpp"
#include "hope/corpus.hpp"
#include "hope/hyperparams.hpp"

namespace hope {

class LossError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LossGradient {
  double loss = 0.0;
  std::vector<double> d_logits;  // same layout as ClassifierOutput::logits
};

/// Mean loss over the batch.
///  CrossEntropy:       -log softmax(z)[gold], needs width-2 logits.
///  BinaryCrossEntropy: -[y log p + (1-y) log(1-p)], p = sigmoid(z), width 1.
/// Both use log-sum-exp forms, so large logits do not overflow.
double compute_loss(const ClassifierOutput& out, std::span<const Label> gold, LossKind kind);

LossGradient loss_with_gradient(const ClassifierOutput& out, std::span<const Label> gold,
                                LossKind kind);

}  // namespace hope
