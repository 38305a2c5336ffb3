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

#include <cmath>
#include <string>
#include <vector>

#include "hope/classifier.hpp"
#include "hope/encoding.hpp"
#include "hope/loss.hpp"
#include "hope/textclean.hpp"
#include "test_support.hpp"

namespace hope::test {

struct GradientCheck {
  std::size_t checked = 0;
  double worst_relative = 0.0;
  std::string worst_name;
};

/// Compares analytic gradients with central differences for up to
/// `per_tensor` entries of every parameter whose name starts with `prefix`.
/// Dropout is off so the loss is a deterministic function of the weights.
/// Relative error uses max(|analytic|, |numeric|); pairs where both are
/// below `floor` are compared absolutely against `floor`.
inline GradientCheck check_gradients(SequenceClassifier<double>& model,
                                     const std::vector<Encoding>& batch,
                                     const std::vector<Label>& gold, const std::string& prefix,
                                     bool update_backbone, std::size_t per_tensor = 6,
                                     double eps = 1e-6, double floor = 1e-7) {
  const LossKind kind = model.params().loss;
  model.zero_grad();
  const auto pass = model.forward_train(batch, /*apply_dropout=*/false);
  const auto lg = loss_with_gradient(SequenceClassifier<double>::to_output(pass.logits), gold, kind);
  nn::Matrix<double> d(pass.logits.rows(), pass.logits.cols());
  for (Eigen::Index i = 0; i < d.size(); ++i) d.data()[i] = lg.d_logits[static_cast<std::size_t>(i)];
  model.backward(pass, d, update_backbone);

  const auto loss_now = [&] { return compute_loss(model.forward(batch, false), gold, kind); };
  GradientCheck result;
  std::vector<std::pair<std::string, nn::Parameter<double>*>> params;
  model.visit_parameters([&](const std::string& name, nn::Parameter<double>& p) {
    if (name.rfind(prefix, 0) == 0) params.emplace_back(name, &p);
  });
  for (auto& [name, p] : params) {
    const Eigen::Index n = p->value.size();
    const Eigen::Index stride = std::max<Eigen::Index>(1, n / static_cast<Eigen::Index>(per_tensor));
    for (Eigen::Index k = 0; k < n; k += stride) {
      double& w = p->value.data()[k];
      const double saved = w;
      w = saved + eps;
      const double up = loss_now();
      w = saved - eps;
      const double down = loss_now();
      w = saved;
      const double numeric = (up - down) / (2 * eps);
      const double analytic = p->grad.data()[k];
      const double scale = std::max(std::abs(numeric), std::abs(analytic));
      const double rel = scale < floor ? std::abs(numeric - analytic) / floor
                                       : std::abs(numeric - analytic) / scale;
      ++result.checked;
      if (rel > result.worst_relative) {
        result.worst_relative = rel;
        result.worst_name = name + "[" + std::to_string(k) + "]";
      }
    }
  }
  return result;
}

inline std::vector<Encoding> gradient_batch(const Tokenizer& tok) {
  std::vector<CleanText> texts{clean("i hope it works"), clean("nothing at all"),
                               clean("hope"), clean("rain again today")};
  return batch_encode(texts, tok, 32);
}

inline const std::vector<Label> kGradientGold{Label::Hope, Label::NotHope, Label::Hope,
                                              Label::NotHope};

}  // namespace hope::test
