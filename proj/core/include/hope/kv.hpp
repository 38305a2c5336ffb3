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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hope {

class KeyValueError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered `key = value` text document. Lines starting with '#' are comments.
/// Used for presets, run configs, manifests, and metric reports.
class KeyValueDoc {
 public:
  static KeyValueDoc parse(std::string_view text, std::string_view source_name = "<text>");
  static KeyValueDoc load(const std::filesystem::path& path);

  std::string serialize() const;

  /// Replaces an existing entry in place or appends a new one.
  void set(std::string_view key, std::string_view value);
  void set(std::string_view key, double value);
  void set(std::string_view key, long long value);
  void set(std::string_view key, int value) { set(key, static_cast<long long>(value)); }
  void set(std::string_view key, std::size_t value) { set(key, static_cast<long long>(value)); }
  void set(std::string_view key, bool value) { set(key, std::string_view(value ? "true" : "false")); }
  void set(std::string_view key, const char* value) { set(key, std::string_view(value)); }

  /// Sets every entry of `other`, with `prefix` prepended to its keys.
  void merge(const KeyValueDoc& other, std::string_view prefix = "");

  bool contains(std::string_view key) const;
  std::optional<std::string> find(std::string_view key) const;

  std::string get_string(std::string_view key) const;
  double get_double(std::string_view key) const;
  long long get_int(std::string_view key) const;
  bool get_bool(std::string_view key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::string source_ = "<text>";
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);
bool parse_bool(std::string_view text, std::string_view what);

std::string_view trim(std::string_view s) noexcept;

}  // namespace hope
