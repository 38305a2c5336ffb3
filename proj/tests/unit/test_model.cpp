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

#include <cmath>

#include "hope/classifier.hpp"
#include "hope/encoding.hpp"
#include "hope/safetensors.hpp"
#include "hope/textclean.hpp"
#include "reference.hpp"

using namespace hope;

namespace {

std::vector<Encoding> encode_all(const std::vector<std::string>& texts, const Tokenizer& tok,
                                 std::size_t max_len = 64) {
  std::vector<CleanText> cleaned;
  for (const auto& t : texts) cleaned.push_back(clean(t));
  return batch_encode(cleaned, tok, max_len);
}

const std::vector<std::string> kTexts{
    "I hope this works", "nothing", "Hope hope HOPE", "a fairly long sentence with many words in it",
    "", "schöne grüße", "x", "we keep going", "tomorrow will be brighter", "rain again",
    "hope", "no", "broken phone today", "together we stand", "ok", "last one here"};

}  // namespace

TEST_CASE("forward yields one logit row per instance") {
  const auto tok = test::toy_tokenizer();
  auto model = test::toy_model<float>(test::toy_params());
  for (std::size_t n : {1u, 3u, 16u}) {
    const std::vector<std::string> texts(kTexts.begin(), kTexts.begin() + static_cast<long>(n));
    const auto out = model->forward(encode_all(texts, *tok), false);
    CHECK(out.rows == n);
    CHECK(out.width == 2);
    CHECK(out.logits.size() == 2 * n);
    for (double v : out.logits) CHECK(std::isfinite(v));
  }
  auto sig = test::toy_model<float>(test::toy_params(LossKind::BinaryCrossEntropy));
  CHECK(sig->infer(encode_all({"a", "b"}, *tok)).width == 1);
}

TEST_CASE("eval mode is bitwise repeatable and train mode applies dropout") {
  const auto tok = test::toy_tokenizer();
  auto model = test::toy_model<float>(test::toy_params());
  const auto batch = encode_all(kTexts, *tok);
  const auto a = model->forward(batch, false);
  const auto b = model->forward(batch, false);
  CHECK(a == b);
  CHECK(model->infer(batch) == a);
  const auto t = model->forward(batch, true);
  CHECK(t.logits != a.logits);
}

TEST_CASE("padding does not change an instance's logits") {
  const auto tok = test::toy_tokenizer();
  auto model = test::toy_model<double>(test::toy_params());
  const auto batch = encode_all(kTexts, *tok);
  const auto together = model->infer(batch);
  for (std::size_t i = 0; i < kTexts.size(); ++i) {
    const auto alone = model->infer(encode_all({kTexts[i]}, *tok));
    for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(alone.row(0)[k] - together.row(i)[k]) < 1e-5);
  }
}

TEST_CASE("same seed gives identical heads, different seeds differ") {
  const auto p = test::toy_params();
  auto a = test::toy_model<float>(p);
  auto b = test::toy_model<float>(p);
  CHECK(a->head().dense.weight.value == b->head().dense.weight.value);
  CHECK(a->head().out_proj.weight.value == b->head().out_proj.weight.value);
  auto q = p;
  q.seed = 8;
  auto c = test::toy_model<float>(q);
  CHECK(a->head().dense.weight.value != c->head().dense.weight.value);
}

TEST_CASE("probabilities and predictions") {
  ClassifierOutput out{3, 2, {0.0, 0.0, 1.0, 3.0, 2.0, -1.0}};
  const auto p = probabilities(out);
  CHECK(p[0][0] == 0.5);
  CHECK(p[1][0] == doctest::Approx(0.1192).epsilon(1e-4));
  CHECK(p[1][1] == doctest::Approx(0.8808).epsilon(1e-4));
  for (const auto& row : p) CHECK(std::abs(row[0] + row[1] - 1.0) < 1e-12);
  CHECK(predict(out) == std::vector<Label>{Label::NotHope, Label::Hope, Label::NotHope});

  ClassifierOutput shifted = out;
  for (double& v : shifted.logits) v += 123.25;
  CHECK(predict(shifted) == predict(out));

  ClassifierOutput extreme{1, 2, {1000.0, -1000.0}};
  CHECK(probabilities(extreme)[0][0] == 1.0);

  ClassifierOutput sig{3, 1, {0.0, 2.0, -2.0}};
  CHECK(predict(sig) == std::vector<Label>{Label::NotHope, Label::Hope, Label::NotHope});
  CHECK(probabilities(sig)[0][1] == 0.5);
  CHECK(probabilities(sig)[1][1] == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))));

  ClassifierOutput bad{2, 2, {0.0, 1.0, NAN, 0.0}};
  try {
    probabilities(bad);
    FAIL("expected NonFiniteError");
  } catch (const NonFiniteError& e) {
    CHECK(e.index() == 1);
  }
}

TEST_CASE("softmax rows of a real forward pass sum to one") {
  const auto tok = test::toy_tokenizer();
  auto model = test::toy_model<float>(test::toy_params());
  for (const auto& row : probabilities(model->infer(encode_all(kTexts, *tok)))) {
    CHECK(std::abs(row[0] + row[1] - 1.0) < 1e-6);
    CHECK(row[0] > 0.0);
    CHECK(row[1] > 0.0);
  }
}

TEST_CASE("malformed batches are rejected") {
  const auto tok = test::toy_tokenizer();
  auto model = test::toy_model<float>(test::toy_params());
  auto batch = encode_all({"a b c", "a"}, *tok);
  batch[1].attention_mask.pop_back();
  CHECK_THROWS_AS(model->infer(batch), ShapeError);
  auto ragged = encode_all({"a b c"}, *tok);
  ragged.push_back(encode(clean("a"), *tok, 64));
  CHECK_THROWS_AS(model->infer(ragged), ShapeError);
  CHECK_THROWS_AS(model->infer(std::vector<Encoding>{}), ShapeError);
  auto too_big = encode_all({"a"}, *tok);
  too_big[0].input_ids[1] = 9999;
  CHECK_THROWS(model->infer(too_big));
}

TEST_CASE("config and backbone dimensions must agree") {
  auto p = test::toy_params();
  const auto cfg = BackboneConfig::toy(p, 264);
  p.hidden_size = 32;
  p.num_attention_heads = 4;
  try {
    SequenceClassifier<float> m(p, cfg);
    FAIL("expected ModelError");
  } catch (const ModelError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("dimension mismatch") != std::string::npos);
    CHECK(msg.find("hidden_size: config 32 vs backbone 16") != std::string::npos);
  }
}

TEST_CASE("the english preset builds a 768-wide, two-logit head") {
  const auto p = preset("english-roberta-base");
  const auto cfg = BackboneConfig::toy(p, 264, 16);
  ClassificationHead<float> head(p.hidden_size, p.num_outputs(), p.activation, p.dropout_rate);
  CHECK(head.dense.weight.value.rows() == 768);
  CHECK(head.dense.weight.value.cols() == 768);
  CHECK(head.out_proj.weight.value.rows() == 2);
  CHECK(cfg.hidden_size == 768);
  CHECK(backbone_mismatches(p, cfg).empty());
}

TEST_CASE("pretrained encoder matches the reference implementation") {
  const auto& ref = test::reference().at("encoder");
  auto p = test::toy_params();
  auto model = build_model<double>(p, BackboneSource::pretrained(test::data_dir() / "tiny_roberta"));
  CHECK(model->backbone_config().max_position_embeddings == 40);
  CHECK(model->max_input_length() == 38);

  const auto ids = ref.at("input_ids").get<std::vector<std::vector<TokenId>>>();
  const auto mask = ref.at("attention_mask").get<std::vector<std::vector<std::uint8_t>>>();
  std::vector<Encoding> batch;
  for (std::size_t b = 0; b < ids.size(); ++b) {
    Encoding e{ids[b], mask[b], 0};
    for (auto m : mask[b]) e.length += m;
    batch.push_back(e);
  }
  const auto tb = TokenBatch::from_encodings(batch);
  const auto hidden = model->backbone().forward(tb, nullptr);
  const auto& expected = ref.at("hidden");
  double worst = 0.0;
  for (std::size_t b = 0; b < tb.rows; ++b) {
    for (std::size_t i = 0; i < batch[b].length; ++i) {
      for (std::size_t h = 0; h < 16; ++h) {
        const double want = expected[b][i][h].get<double>();
        const double got = hidden(static_cast<Eigen::Index>(b * tb.seq_len + i), static_cast<Eigen::Index>(h));
        worst = std::max(worst, std::abs(want - got));
      }
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("pretrained sources must match the configured dimensions") {
  auto p = preset("english-roberta-base");
  CHECK_THROWS_AS(build_model<float>(p, BackboneSource::pretrained(test::data_dir() / "tiny_roberta")),
                  ModelError);
  CHECK_THROWS(build_model<float>(test::toy_params(), BackboneSource::pretrained("/nonexistent")));
}

TEST_CASE("missing tensors are reported by name") {
  test::TempDir dir;
  std::filesystem::copy(test::data_dir() / "tiny_roberta/config.json", dir / "config.json");
  const auto src = SafetensorsFile::open(test::data_dir() / "tiny_roberta/model.safetensors");
  std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<float>>> kept;
  for (const auto& [name, info] : src.tensors()) {
    if (name == "encoder.layer.1.output.dense.weight") continue;
    const auto values = src.read(name);
    kept[name] = {info.shape, std::vector<float>(values.begin(), values.end())};
  }
  write_safetensors_f32(dir / "model.safetensors", kept);
  try {
    build_model<float>(test::toy_params(), BackboneSource::pretrained(dir.path()));
    FAIL("expected ModelError");
  } catch (const ModelError& e) {
    CHECK(std::string(e.what()).find("encoder.layer.1.output.dense.weight") != std::string::npos);
  }
}
