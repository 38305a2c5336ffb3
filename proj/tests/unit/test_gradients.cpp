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

#include <doctest.h>

#include "gradient_check.hpp"

using namespace hope;

namespace {

// Relative tolerance for analytic versus central-difference gradients.
constexpr double kTolerance = 1e-3;

}  // namespace

TEST_CASE("head gradients match finite differences with a frozen backbone") {
  const auto tok = test::toy_tokenizer();
  for (auto act : {Activation::Gelu, Activation::Relu}) {
    for (auto loss : {LossKind::CrossEntropy, LossKind::BinaryCrossEntropy}) {
      auto p = test::toy_params(loss);
      p.activation = act;
      auto model = test::toy_model<double>(p);
      const auto r = test::check_gradients(*model, test::gradient_batch(*tok), test::kGradientGold,
                                           "classifier.", /*update_backbone=*/false, 64);
      CAPTURE(r.worst_name);
      CHECK(r.checked > 90);
      CHECK(r.worst_relative < kTolerance);
    }
  }
}

TEST_CASE("backbone gradients match finite differences") {
  const auto tok = test::toy_tokenizer();
  auto p = test::toy_params();
  auto model = test::toy_model<double>(p);
  // Larger weights than the 0.02 default so every path carries signal.
  nn::Rng rng(99);
  model->backbone().visit([&](const std::string& name, nn::Parameter<double>& w) {
    if (name.find("LayerNorm") != std::string::npos) return;
    for (Eigen::Index i = 0; i < w.value.size(); ++i) w.value.data()[i] = 0.3 * rng.normal();
  });
  const auto r = test::check_gradients(*model, test::gradient_batch(*tok), test::kGradientGold,
                                       "roberta.", /*update_backbone=*/true, 8);
  CAPTURE(r.worst_name);
  CHECK(r.checked > 90);
  CHECK(r.worst_relative < kTolerance);
}

TEST_CASE("frozen backbone receives no gradient") {
  const auto tok = test::toy_tokenizer();
  auto model = test::toy_model<double>(test::toy_params());
  test::check_gradients(*model, test::gradient_batch(*tok), test::kGradientGold, "classifier.",
                        false, 1);
  model->backbone().visit([](const std::string&, nn::Parameter<double>& w) {
    CHECK(w.grad.norm() == 0.0);
  });
}
