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

#include <memory>
#include <string>
#include <unordered_map>

#include "hope/backbone.hpp"
#include "hope/hyperparams.hpp"
#include "hope/nn.hpp"

namespace hope {

struct OptimizerSettings {
  double learning_rate = 2e-5;
  // AdamW
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
  // RMSProp
  double alpha = 0.99;
};

/// Stateful first-order optimizer keyed by parameter name.
template <typename T>
class Optimizer {
 public:
  virtual ~Optimizer() = default;
  /// Applies one update to every visited parameter using its accumulated grad.
  virtual void step(const std::function<void(const ParameterVisitor<T>&)>& visit_all) = 0;
};

/// Decoupled weight decay: p -= lr*wd*p, then the bias-corrected Adam step.
template <typename T>
class AdamW final : public Optimizer<T> {
 public:
  explicit AdamW(OptimizerSettings s) : s_(s) {}
  void step(const std::function<void(const ParameterVisitor<T>&)>& visit_all) override;

 private:
  struct State {
    nn::Matrix<T> m, v;
  };
  OptimizerSettings s_;
  std::unordered_map<std::string, State> state_;
  long long t_ = 0;
};

/// v = alpha v + (1 - alpha) g^2;  p -= lr g / (sqrt(v) + eps).
template <typename T>
class RmsProp final : public Optimizer<T> {
 public:
  explicit RmsProp(OptimizerSettings s) : s_(s) {}
  void step(const std::function<void(const ParameterVisitor<T>&)>& visit_all) override;

 private:
  OptimizerSettings s_;
  std::unordered_map<std::string, nn::Matrix<T>> square_avg_;
};

template <typename T>
std::unique_ptr<Optimizer<T>> make_optimizer(OptimizerKind kind, const OptimizerSettings& s);

/// Rescales all gradients so their global L2 norm is at most `max_norm`.
/// Returns the norm before clipping.
template <typename T>
double clip_grad_norm(const std::function<void(const ParameterVisitor<T>&)>& visit_all,
                      double max_norm);

}  // namespace hope
