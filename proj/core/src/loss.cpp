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

#include "hope/loss.hpp"

#include <cmath>
#include <string>

namespace hope {
namespace {

void check_shapes(const ClassifierOutput& out, std::span<const Label> gold, LossKind kind) {
  if (gold.size() != out.rows) {
    throw LossError("loss: " + std::to_string(gold.size()) + " gold labels for " +
                    std::to_string(out.rows) + " logit rows");
  }
  if (out.rows == 0) throw LossError("loss: empty batch");
  const std::size_t want = kind == LossKind::CrossEntropy ? 2 : 1;
  if (out.width != want) {
    throw LossError("loss: " + std::string(to_string(kind)) + " expects " + std::to_string(want) +
                    " logit(s) per row, got " + std::to_string(out.width));
  }
}

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

LossGradient loss_with_gradient(const ClassifierOutput& out, std::span<const Label> gold,
                                LossKind kind) {
  check_shapes(out, gold, kind);
  const double inv_n = 1.0 / static_cast<double>(out.rows);
  LossGradient g;
  g.d_logits.assign(out.logits.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < out.rows; ++i) {
    const auto z = out.row(i);
    const int y = to_index(gold[i]);
    if (kind == LossKind::CrossEntropy) {
      const double m = std::max(z[0], z[1]);
      const double lse = m + std::log(std::exp(z[0] - m) + std::exp(z[1] - m));
      total += lse - z[y];
      for (int c = 0; c < 2; ++c) {
        const double p = std::exp(z[c] - lse);
        g.d_logits[i * 2 + c] = (p - (c == y ? 1.0 : 0.0)) * inv_n;
      }
    } else {
      // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
      total += softplus(z[0]) - y * z[0];
      const double p = 1.0 / (1.0 + std::exp(-z[0]));
      g.d_logits[i] = (p - y) * inv_n;
    }
  }
  g.loss = total * inv_n;
  return g;
}

double compute_loss(const ClassifierOutput& out, std::span<const Label> gold, LossKind kind) {
  return loss_with_gradient(out, gold, kind).loss;
}

}  // namespace hope
