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
#include <fstream>

#include "hope/checkpoint.hpp"
#include "hope/encoding.hpp"
#include "hope/textclean.hpp"
#include "test_support.hpp"

using namespace hope;

namespace {

std::vector<Encoding> fixed_batch(const Tokenizer& tok) {
  std::vector<CleanText> texts{clean("i hope so"), clean("no"), clean(""), clean("hope hope")};
  return batch_encode(texts, tok, 32);
}

}  // namespace

TEST_CASE("save then load reproduces logits bitwise") {
  test::TempDir dir;
  const auto tok = test::toy_tokenizer();
  for (auto loss : {LossKind::CrossEntropy, LossKind::BinaryCrossEntropy}) {
    auto model = test::toy_model<float>(test::toy_params(loss));
    const auto before = model->infer(fixed_batch(*tok));
    save_checkpoint(*model, *tok, dir / "ckpt");
    const auto loaded = load_checkpoint<float>(dir / "ckpt");
    CHECK(loaded.model->params() == model->params());
    CHECK(loaded.model->backbone_config() == model->backbone_config());
    CHECK(loaded.model->infer(fixed_batch(*loaded.tokenizer)) == before);
  }
}

TEST_CASE("double checkpoints round-trip and convert to float on load") {
  test::TempDir dir;
  const auto tok = test::toy_tokenizer();
  auto model = test::toy_model<double>(test::toy_params());
  save_checkpoint(*model, *tok, dir / "ckpt");
  CHECK(load_checkpoint<double>(dir / "ckpt").model->infer(fixed_batch(*tok)) ==
        model->infer(fixed_batch(*tok)));
  const auto narrowed = load_checkpoint<float>(dir / "ckpt").model->infer(fixed_batch(*tok));
  const auto wide = model->infer(fixed_batch(*tok));
  for (std::size_t i = 0; i < wide.logits.size(); ++i) {
    CHECK(std::abs(narrowed.logits[i] - wide.logits[i]) < 1e-5);
  }
}

TEST_CASE("truncated or corrupted weights are detected") {
  test::TempDir dir;
  const auto tok = test::toy_tokenizer();
  auto model = test::toy_model<float>(test::toy_params());
  save_checkpoint(*model, *tok, dir / "ckpt");
  const auto weights = dir / "ckpt/weights.bin";
  const std::string bytes = read_file(weights);

  atomic_write(weights, std::string_view(bytes).substr(0, bytes.size() / 2));
  try {
    load_checkpoint<float>(dir / "ckpt");
    FAIL("expected CheckpointError");
  } catch (const CheckpointError& e) {
    CHECK(e.kind() == CheckpointError::Kind::Corrupt);
  }

  std::string flipped = bytes;
  flipped[flipped.size() / 2] = static_cast<char>(flipped[flipped.size() / 2] ^ 0x10);
  atomic_write(weights, flipped);
  try {
    load_checkpoint<float>(dir / "ckpt");
    FAIL("expected CheckpointError");
  } catch (const CheckpointError& e) {
    CHECK(e.kind() == CheckpointError::Kind::Corrupt);
  }
}

TEST_CASE("missing checkpoints and version mismatches are distinguished") {
  test::TempDir dir;
  try {
    load_checkpoint<float>(dir / "nothing");
    FAIL("expected CheckpointError");
  } catch (const CheckpointError& e) {
    CHECK(e.kind() == CheckpointError::Kind::Missing);
  }
  const auto tok = test::toy_tokenizer();
  auto model = test::toy_model<float>(test::toy_params());
  save_checkpoint(*model, *tok, dir / "ckpt");
  auto cfg = KeyValueDoc::load(dir / "ckpt/config.kv");
  cfg.set("format_version", 99);
  atomic_write(dir / "ckpt/config.kv", cfg.serialize());
  try {
    load_checkpoint<float>(dir / "ckpt");
    FAIL("expected CheckpointError");
  } catch (const CheckpointError& e) {
    CHECK(e.kind() == CheckpointError::Kind::VersionMismatch);
  }
}

TEST_CASE("a different configured hidden size is a mismatch naming both sizes") {
  test::TempDir dir;
  const auto tok = test::toy_tokenizer();
  auto model = test::toy_model<float>(test::toy_params());
  save_checkpoint(*model, *tok, dir / "ckpt");
  auto expected = test::toy_params();
  expected.hidden_size = 32;
  try {
    load_checkpoint<float>(dir / "ckpt", expected);
    FAIL("expected CheckpointError");
  } catch (const CheckpointError& e) {
    CHECK(e.kind() == CheckpointError::Kind::ConfigMismatch);
    const std::string msg = e.what();
    CHECK(msg.find("16") != std::string::npos);
    CHECK(msg.find("32") != std::string::npos);
  }
  CHECK_NOTHROW(load_checkpoint<float>(dir / "ckpt", test::toy_params()));
  CHECK(read_checkpoint_params(dir / "ckpt") == test::toy_params());
}

TEST_CASE("saving over an existing checkpoint replaces it") {
  test::TempDir dir;
  const auto tok = test::toy_tokenizer();
  auto a = test::toy_model<float>(test::toy_params());
  auto q = test::toy_params();
  q.seed = 99;
  auto b = test::toy_model<float>(q);
  save_checkpoint(*a, *tok, dir / "ckpt");
  save_checkpoint(*b, *tok, dir / "ckpt");
  CHECK(load_checkpoint<float>(dir / "ckpt").model->infer(fixed_batch(*tok)) ==
        b->infer(fixed_batch(*tok)));
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++entries;
  CHECK(entries == 1);
}
