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

#include "hope/safetensors.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "json.hpp"

#include "hope/backbone.hpp"
#include "hope/fileio.hpp"

namespace hope {
using json = nlohmann::json;

static_assert(std::endian::native == std::endian::little, "little-endian host required");

namespace {

std::size_t dtype_size(const std::string& dtype) {
  if (dtype == "F32") return 4;
  if (dtype == "F16" || dtype == "BF16") return 2;
  if (dtype == "F64") return 8;
  return 0;
}

double half_to_double(std::uint16_t h) {
  const int sign = (h >> 15) & 1;
  const int exp = (h >> 10) & 0x1F;
  const int mant = h & 0x3FF;
  double v;
  if (exp == 0) {
    v = std::ldexp(static_cast<double>(mant), -24);
  } else if (exp == 31) {
    v = mant ? std::numeric_limits<double>::quiet_NaN() : std::numeric_limits<double>::infinity();
  } else {
    v = std::ldexp(static_cast<double>(mant | 0x400), exp - 25);
  }
  return sign ? -v : v;
}

}  // namespace

std::size_t SafetensorsFile::TensorInfo::numel() const noexcept {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

SafetensorsFile SafetensorsFile::open(const std::filesystem::path& path) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const IoError& e) {
    throw ModelError(std::string("missing weights: ") + e.what());
  }
  const auto corrupt = [&](const std::string& why) {
    return ModelError(path.string() + ": corrupt safetensors file (" + why + ")");
  };
  if (bytes.size() < 8) throw corrupt("too short");
  std::uint64_t header_len = 0;
  std::memcpy(&header_len, bytes.data(), 8);
  if (header_len > bytes.size() - 8) throw corrupt("header length exceeds file size");

  SafetensorsFile f;
  f.path_ = path;
  json header;
  try {
    header = json::parse(bytes.substr(8, header_len));
  } catch (const json::exception& e) {
    throw corrupt(e.what());
  }
  f.data_ = bytes.substr(8 + header_len);

  for (const auto& [name, entry] : header.items()) {
    if (name == "__metadata__") continue;
    TensorInfo t;
    try {
      t.dtype = entry.at("dtype").get<std::string>();
      t.shape = entry.at("shape").get<std::vector<std::size_t>>();
      const auto offs = entry.at("data_offsets").get<std::vector<std::size_t>>();
      if (offs.size() != 2) throw corrupt("bad data_offsets for " + name);
      t.begin = offs[0];
      t.end = offs[1];
    } catch (const json::exception& e) {
      throw corrupt(e.what());
    }
    const std::size_t width = dtype_size(t.dtype);
    if (t.end < t.begin || t.end > f.data_.size()) throw corrupt("offsets out of range for " + name);
    if (width != 0 && t.end - t.begin != t.numel() * width) {
      throw corrupt("size mismatch for " + name);
    }
    f.tensors_.emplace(name, std::move(t));
  }
  return f;
}

const SafetensorsFile::TensorInfo& SafetensorsFile::info(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw ModelError(path_.string() + ": missing tensor '" + name + "'");
  return it->second;
}

std::vector<double> SafetensorsFile::read(const std::string& name) const {
  const TensorInfo& t = info(name);
  const char* p = data_.data() + t.begin;
  const std::size_t n = t.numel();
  std::vector<double> out(n);
  if (t.dtype == "F32") {
    for (std::size_t i = 0; i < n; ++i) {
      float v;
      std::memcpy(&v, p + 4 * i, 4);
      out[i] = v;
    }
  } else if (t.dtype == "F64") {
    std::memcpy(out.data(), p, 8 * n);
  } else if (t.dtype == "F16") {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint16_t h;
      std::memcpy(&h, p + 2 * i, 2);
      out[i] = half_to_double(h);
    }
  } else if (t.dtype == "BF16") {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint16_t h;
      std::memcpy(&h, p + 2 * i, 2);
      const std::uint32_t bits = static_cast<std::uint32_t>(h) << 16;
      float v;
      std::memcpy(&v, &bits, 4);
      out[i] = v;
    }
  } else {
    throw ModelError(path_.string() + ": tensor '" + name + "' has unsupported dtype " + t.dtype);
  }
  return out;
}

void write_safetensors_f32(
    const std::filesystem::path& path,
    const std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<float>>>& tensors) {
  json header = json::object();
  std::string payload;
  for (const auto& [name, t] : tensors) {
    const std::size_t begin = payload.size();
    payload.append(reinterpret_cast<const char*>(t.second.data()), t.second.size() * 4);
    header[name] = {{"dtype", "F32"}, {"shape", t.first}, {"data_offsets", {begin, payload.size()}}};
  }
  const std::string h = header.dump();
  const std::uint64_t len = h.size();
  std::string out(8, '\0');
  std::memcpy(out.data(), &len, 8);
  out += h;
  out += payload;
  atomic_write(path, out);
}

}  // namespace hope
