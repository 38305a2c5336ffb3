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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "hope/classifier.hpp"
#include "hope/encoding.hpp"
#include "hope/textclean.hpp"
#include "hope/tokenizer.hpp"

namespace {

hope::HyperParams toy_params() {
  hope::HyperParams p = hope::preset("english-roberta-base");
  p.hidden_size = 64;
  p.num_layers = 2;
  p.num_attention_heads = 4;
  p.intermediate_size = 128;
  return p;
}

std::vector<hope::Encoding> batch(const hope::Tokenizer& tok, std::size_t n) {
  std::vector<hope::CleanText> texts;
  for (std::size_t i = 0; i < n; ++i) {
    texts.push_back(hope::clean("we still hope that tomorrow brings something better for all of us " +
                                std::to_string(i)));
  }
  return hope::batch_encode(texts, tok, 128);
}

void BM_ToyInfer(benchmark::State& state) {
  const auto tok = hope::load_tokenizer(std::string(hope::kBuiltinToyTokenizer));
  const auto model =
      hope::build_model<float>(toy_params(), hope::BackboneSource::toy(tok->vocab_size()));
  const auto encodings = batch(*tok, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(model->infer(encodings));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * state.range(0)));
}
BENCHMARK(BM_ToyInfer)->Arg(1)->Arg(16);

void BM_Tokenize(benchmark::State& state) {
  const auto tok = hope::load_tokenizer(std::string(hope::kBuiltinToyTokenizer));
  const std::string text = "we still hope that tomorrow brings something better for all of us";
  for (auto _ : state) benchmark::DoNotOptimize(tok->tokenize(text));
}
BENCHMARK(BM_Tokenize);

}  // namespace

BENCHMARK_MAIN();
