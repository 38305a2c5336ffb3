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

#include <random>
#include <vector>

#include "hope/metrics.hpp"

namespace {

void BM_Report(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.5);
  std::vector<hope::Label> gold(n), pred(n);
  for (std::size_t i = 0; i < n; ++i) {
    gold[i] = coin(rng) ? hope::Label::Hope : hope::Label::NotHope;
    pred[i] = coin(rng) ? hope::Label::Hope : hope::Label::NotHope;
  }
  for (auto _ : state) benchmark::DoNotOptimize(hope::report(gold, pred));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_Report)->Arg(2065)->Arg(5262);

}  // namespace

BENCHMARK_MAIN();
