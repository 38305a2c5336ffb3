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

#include <json.hpp>

#include "hope/fileio.hpp"
#include "test_support.hpp"

namespace hope::test {

/// Token ids and encoder activations produced by the Hugging Face reference
/// implementations (see tests/data/generate_fixtures.py).
inline const nlohmann::json& reference() {
  static const nlohmann::json doc = nlohmann::json::parse(read_file(data_dir() / "reference.json"));
  return doc;
}

}  // namespace hope::test
