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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace hope {

/// Read-only view of a .safetensors file: an 8-byte little-endian header
/// length, a JSON header, then raw tensor bytes.
class SafetensorsFile {
 public:
  struct TensorInfo {
    std::string dtype;  // "F32", "F16", "BF16", "F64"
    std::vector<std::size_t> shape;
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t numel() const noexcept;
  };

  static SafetensorsFile open(const std::filesystem::path& path);

  bool contains(const std::string& name) const { return tensors_.count(name) != 0; }
  const TensorInfo& info(const std::string& name) const;
  const std::map<std::string, TensorInfo>& tensors() const noexcept { return tensors_; }

  /// Tensor values converted to double, in row-major order.
  std::vector<double> read(const std::string& name) const;

 private:
  std::filesystem::path path_;
  std::string data_;  // bytes after the header
  std::map<std::string, TensorInfo> tensors_;
};

/// Minimal writer for F32 tensors; used to export weights and build fixtures.
void write_safetensors_f32(const std::filesystem::path& path,
                           const std::map<std::string, std::pair<std::vector<std::size_t>,
                                                                 std::vector<float>>>& tensors);

}  // namespace hope
