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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hope/kv.hpp"

namespace hope {

/// Binary task label. The integer encoding is fixed: NotHope = 0, Hope = 1,
/// so "positive class" in metric terms means Hope.
enum class Label : std::uint8_t { NotHope = 0, Hope = 1 };

inline constexpr std::size_t kNumClasses = 2;

std::string_view to_string(Label label) noexcept;
constexpr int to_index(Label label) noexcept { return static_cast<int>(label); }
Label label_from_index(int index);

/// Trims, case-folds, and collapses inner whitespace before matching
/// "hope" / "not hope".
std::optional<Label> parse_label(std::string_view text);

enum class SplitName { Train, Dev, Test };

std::string_view to_string(SplitName name) noexcept;
SplitName parse_split_name(std::string_view text);

struct TextInstance {
  std::string id;
  std::string text;
  std::optional<Label> label;

  friend bool operator==(const TextInstance&, const TextInstance&) = default;
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class MissingFileError : public CorpusError {
 public:
  using CorpusError::CorpusError;
};
class MalformedRowError : public CorpusError {
 public:
  using CorpusError::CorpusError;
};
class UnknownLabelError : public CorpusError {
 public:
  UnknownLabelError(std::string id, std::string value);
  const std::string& id() const noexcept { return id_; }
  const std::string& value() const noexcept { return value_; }

 private:
  std::string id_;
  std::string value_;
};
class DuplicateIdError : public CorpusError {
 public:
  explicit DuplicateIdError(std::string id);
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};
class MissingLabelError : public CorpusError {
 public:
  using CorpusError::CorpusError;
};

/// An ordered, immutable collection of instances with non-empty unique ids.
class DatasetSplit {
 public:
  DatasetSplit(SplitName name, std::vector<TextInstance> instances);

  SplitName name() const noexcept { return name_; }
  std::span<const TextInstance> instances() const noexcept { return instances_; }
  std::size_t size() const noexcept { return instances_.size(); }
  bool empty() const noexcept { return instances_.empty(); }
  const TextInstance& operator[](std::size_t i) const { return instances_[i]; }

  bool fully_labeled() const noexcept;
  bool any_labeled() const noexcept;

  friend bool operator==(const DatasetSplit&, const DatasetSplit&) = default;

 private:
  SplitName name_;
  std::vector<TextInstance> instances_;
};

/// Parses a delimited table with header columns `id`, `text` and optionally
/// `label` (any order; other columns are ignored). With `require_labels`,
/// a missing label column or an empty label cell is an error.
DatasetSplit load_split(const std::filesystem::path& path, SplitName name, bool require_labels);
DatasetSplit parse_split(std::string_view content, SplitName name, bool require_labels,
                         char delimiter = ',', std::string_view source_name = "<memory>");

/// Inverse of parse_split. The label column is written only if some instance
/// carries a label.
std::string serialize_split(const DatasetSplit& split, char delimiter = ',');

struct ClassCounts {
  std::size_t total = 0;
  std::size_t hope = 0;
  std::size_t not_hope = 0;

  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

ClassCounts split_statistics(const DatasetSplit& split) noexcept;

struct CountDiff {
  std::string field;
  std::size_t actual = 0;
  std::size_t expected = 0;
};

struct VerificationReport {
  bool passed = true;
  ClassCounts actual;
  ClassCounts expected;
  std::vector<CountDiff> diffs;

  KeyValueDoc to_key_value(std::string_view prefix = "") const;
};

VerificationReport verify_expected_counts(const ClassCounts& stats, const ClassCounts& expected);

/// Published class distribution of one dataset split, used to detect
/// corrupted or mismatched downloads.
struct ReferenceCounts {
  std::string_view name;
  ClassCounts counts;
};

std::span<const ReferenceCounts> reference_counts() noexcept;
std::optional<ClassCounts> find_reference_counts(std::string_view name) noexcept;

}  // namespace hope
