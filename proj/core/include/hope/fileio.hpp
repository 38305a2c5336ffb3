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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hope {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary and renames over `path`, so readers never
/// observe a partially written file.
void atomic_write(const std::filesystem::path& path, std::string_view content);

/// Moves a fully populated staging directory onto `target`, replacing any
/// previous directory there.
void commit_directory(const std::filesystem::path& staging, const std::filesystem::path& target);

/// Fresh empty staging directory next to `target`.
std::filesystem::path make_staging_directory(const std::filesystem::path& target);

}  // namespace hope
