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
#include <string>
#include <vector>

#include "hope/textclean.hpp"

namespace {

std::vector<std::string> corpus(std::size_t n) {
  static const std::vector<std::string> pieces{
      "Hope ", "things ", "get ", "better ", "soon ", "🙏 ", "https://t.co/abc123 ", "Grüße ",
      "SCHÖNE ", "2024!! ", "@user ", "#tag ", "  \t", "straße ", "www.example.org "};
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::vector<std::string> out(n);
  for (auto& s : out) {
    for (int k = 0; k < 30; ++k) s += pieces[pick(rng)];
  }
  return out;
}

void BM_Clean(benchmark::State& state) {
  const auto texts = corpus(256);
  std::size_t bytes = 0;
  for (const auto& t : texts) bytes += t.size();
  for (auto _ : state) {
    for (const auto& t : texts) benchmark::DoNotOptimize(hope::clean(t));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes));
}
BENCHMARK(BM_Clean);

}  // namespace

BENCHMARK_MAIN();
