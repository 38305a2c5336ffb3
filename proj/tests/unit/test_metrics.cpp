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

#include <random>

#include "hope/metrics.hpp"
#include "metric_oracle.hpp"

using namespace hope;

namespace {

constexpr Label H = Label::Hope;
constexpr Label N = Label::NotHope;

std::vector<int> ints(const std::vector<Label>& v) {
  std::vector<int> out;
  for (Label l : v) out.push_back(to_index(l));
  return out;
}

}  // namespace

TEST_CASE("hand-worked case") {
  const std::vector<Label> gold{H, H, H, N};
  const std::vector<Label> pred{H, H, N, N};
  const auto r = report(gold, pred);
  // Hope: P = 2/2, R = 2/3, F1 = 0.8. Not Hope: P = 1/2, R = 1/1, F1 = 2/3.
  CHECK(r.of(H).precision == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.of(H).recall == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(r.of(N).f1 == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(std::abs(r.macro_f1 - 0.7333333333333333) < 1e-9);
  CHECK(std::abs(r.weighted_f1 - 0.7666666666666667) < 1e-9);
  CHECK(r.accuracy == 0.75);
  CHECK(r.matrix.at(H, N) == 1);
  CHECK(r.matrix.at(H, H) == 2);
  CHECK(r.matrix.at(N, N) == 1);
  CHECK(r.matrix.at(N, H) == 0);
}

TEST_CASE("perfect and fully wrong predictions") {
  const std::vector<Label> g{H, N, H, N};
  const auto perfect = report(g, g);
  CHECK(perfect.macro_f1 == 1.0);
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.zero_division.empty());
  const std::vector<Label> flipped{N, H, N, H};
  const auto wrong = report(g, flipped);
  CHECK(wrong.macro_f1 == 0.0);
  CHECK(wrong.accuracy == 0.0);
}

TEST_CASE("0/0 ratios are reported as zero and flagged") {
  const std::vector<Label> g{H, H};
  const std::vector<Label> p{H, H};
  const auto r = report(g, p);
  CHECK(r.of(N).precision == 0.0);
  CHECK(r.of(N).recall == 0.0);
  CHECK(r.of(N).f1 == 0.0);
  CHECK(r.macro_f1 == 0.5);
  CHECK(r.zero_division ==
        std::vector<std::string>{"precision.not_hope", "recall.not_hope", "f1.not_hope"});
  CHECK(r.to_key_value().get_string("zero_division") ==
        "precision.not_hope,recall.not_hope,f1.not_hope");
}

TEST_CASE("length mismatch and empty input are errors") {
  const std::vector<Label> a{H, N};
  const std::vector<Label> b{H};
  CHECK_THROWS_AS(report(a, b), MetricsError);
  CHECK_THROWS_AS(report(std::vector<Label>{}, std::vector<Label>{}), MetricsError);
}

TEST_CASE("report agrees with the counting oracle on random vectors") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    const double bias = static_cast<double>(rng() % 100) / 100.0;
    std::bernoulli_distribution coin(bias);
    std::vector<Label> g(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = coin(rng) ? H : N;
      p[i] = rng() % 2 ? H : N;
    }
    const auto r = report(g, p);
    const auto o = test::oracle::brute_force(ints(g), ints(p));
    for (int c = 0; c < 2; ++c) {
      CHECK(std::abs(r.per_class[c].precision - o.precision[c]) <= 1e-12);
      CHECK(std::abs(r.per_class[c].recall - o.recall[c]) <= 1e-12);
      CHECK(std::abs(r.per_class[c].f1 - o.f1[c]) <= 1e-12);
      CHECK(static_cast<double>(r.per_class[c].support) == o.support[c]);
    }
    CHECK(std::abs(r.macro_f1 - o.macro_f1) <= 1e-12);
    CHECK(std::abs(r.weighted_f1 - o.weighted_f1) <= 1e-12);
    CHECK(std::abs(r.accuracy - o.accuracy) <= 1e-12);
    CHECK(r.total() == n);
  }
}

TEST_CASE("metric invariants") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<Label> g(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = rng() % 2 ? H : N;
      p[i] = rng() % 3 ? g[i] : (rng() % 2 ? H : N);
    }
    const auto r = report(g, p);
    for (double v : {r.macro_precision, r.macro_recall, r.macro_f1, r.weighted_f1, r.accuracy}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    // The macro F1 lies between the two per-class values.
    CHECK(r.macro_f1 >= std::min(r.of(H).f1, r.of(N).f1) - 1e-15);
    CHECK(r.macro_f1 <= std::max(r.of(H).f1, r.of(N).f1) + 1e-15);
    // Swapping the label names leaves the macro averages unchanged.
    std::vector<Label> gs(n), ps(n);
    for (std::size_t i = 0; i < n; ++i) {
      gs[i] = g[i] == H ? N : H;
      ps[i] = p[i] == H ? N : H;
    }
    const auto s = report(gs, ps);
    CHECK(s.macro_f1 == doctest::Approx(r.macro_f1).epsilon(1e-14));
    CHECK(s.accuracy == r.accuracy);
    CHECK(r.matrix.total() == n);
  }
}

TEST_CASE("table and headline use four decimals") {
  const std::vector<Label> g{H, H, H, N};
  const std::vector<Label> p{H, H, N, N};
  const auto r = report(g, p);
  CHECK(r.headline() ==
        "macro_precision 0.7500\nmacro_recall 0.8333\nmacro_f1 0.7333\naccuracy 0.7500\n");
  CHECK(r.to_table().find("macro avg          0.7500     0.8333     0.7333") !=
        std::string::npos);
  const auto kv = r.to_key_value();
  CHECK(kv.get_int("confusion.hope.not_hope") == 1);
  CHECK(kv.get_int("class.hope.support") == 3);
}

TEST_CASE("rank_submissions orders by macro F1, then accuracy, then name") {
  const auto mk = [](double f1, double acc) {
    MetricsReport r;
    r.macro_f1 = f1;
    r.accuracy = acc;
    return r;
  };
  const std::vector<NamedReport> subs{{"b", mk(0.8, 0.80)}, {"a", mk(0.8, 0.80)},
                                      {"c", mk(0.9, 0.70)}, {"d", mk(0.8, 0.85)}};
  CHECK(rank_submissions(subs) == std::vector<std::string>{"c", "d", "a", "b"});
}
