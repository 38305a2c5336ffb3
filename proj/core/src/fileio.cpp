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

#include "hope/fileio.hpp"

#include <fstream>
#include <sstream>

#include <unistd.h>

namespace hope {
namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw IoError("file not found: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return std::move(ss).str();
}

namespace {

fs::path sibling_temp(const fs::path& target, std::string_view tag) {
  auto name = target.filename().string();
  if (name.empty()) name = "out";
  return target.parent_path() /
         ("." + name + "." + std::string(tag) + "." + std::to_string(::getpid()));
}

}  // namespace

void atomic_write(const fs::path& path, std::string_view content) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  const auto tmp = sibling_temp(path, "tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed: " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into place: " + path.string());
  }
}

fs::path make_staging_directory(const fs::path& target) {
  if (!target.parent_path().empty()) fs::create_directories(target.parent_path());
  const auto staging = sibling_temp(target, "staging");
  fs::remove_all(staging);
  fs::create_directories(staging);
  return staging;
}

void commit_directory(const fs::path& staging, const fs::path& target) {
  std::error_code ec;
  if (fs::exists(target, ec)) {
    const auto old = sibling_temp(target, "old");
    fs::remove_all(old, ec);
    fs::rename(target, old);
    fs::rename(staging, target);
    fs::remove_all(old, ec);
  } else {
    fs::rename(staging, target);
  }
}

}  // namespace hope
