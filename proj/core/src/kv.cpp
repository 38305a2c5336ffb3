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

#include "hope/kv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "hope/fileio.hpp"

namespace hope {

std::string_view trim(std::string_view s) noexcept {
  const auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return s;
}

KeyValueDoc KeyValueDoc::parse(std::string_view text, std::string_view source_name) {
  KeyValueDoc doc;
  doc.source_ = std::string(source_name);
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw KeyValueError(doc.source_ + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw KeyValueError(doc.source_ + ":" + std::to_string(line_no) + ": empty key");
    }
    if (doc.contains(key)) {
      throw KeyValueError(doc.source_ + ":" + std::to_string(line_no) + ": duplicate key '" +
                          std::string(key) + "'");
    }
    doc.entries_.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return doc;
}

KeyValueDoc KeyValueDoc::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.string());
}

std::string KeyValueDoc::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

void KeyValueDoc::set(std::string_view key, std::string_view value) {
  if (value.find('\n') != std::string_view::npos) {
    throw KeyValueError("value for '" + std::string(key) + "' contains a newline");
  }
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::string(value);
      return;
    }
  }
  entries_.emplace_back(std::string(key), std::string(value));
}

void KeyValueDoc::set(std::string_view key, double value) { set(key, format_double(value)); }

void KeyValueDoc::set(std::string_view key, long long value) { set(key, std::to_string(value)); }

void KeyValueDoc::merge(const KeyValueDoc& other, std::string_view prefix) {
  for (const auto& [k, v] : other.entries_) set(std::string(prefix) + k, v);
}

bool KeyValueDoc::contains(std::string_view key) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.first == key; });
}

std::optional<std::string> KeyValueDoc::find(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string KeyValueDoc::get_string(std::string_view key) const {
  auto v = find(key);
  if (!v) throw KeyValueError(source_ + ": missing key '" + std::string(key) + "'");
  return *v;
}

double KeyValueDoc::get_double(std::string_view key) const {
  return parse_double(get_string(key), key);
}

long long KeyValueDoc::get_int(std::string_view key) const {
  return parse_int(get_string(key), key);
}

bool KeyValueDoc::get_bool(std::string_view key) const { return parse_bool(get_string(key), key); }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw KeyValueError("'" + std::string(what) + "': expected a number, got '" +
                        std::string(text) + "'");
  }
  return v;
}

long long parse_int(std::string_view text, std::string_view what) {
  text = trim(text);
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw KeyValueError("'" + std::string(what) + "': expected an integer, got '" +
                        std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view text, std::string_view what) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw KeyValueError("'" + std::string(what) + "': expected true/false, got '" +
                      std::string(text) + "'");
}

}  // namespace hope
