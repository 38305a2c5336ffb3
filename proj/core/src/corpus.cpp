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

#include "hope/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

#include "hope/csv.hpp"
#include "hope/fileio.hpp"

namespace hope {

std::string_view to_string(Label label) noexcept {
  return label == Label::Hope ? "Hope" : "Not Hope";
}

Label label_from_index(int index) {
  switch (index) {
    case 0: return Label::NotHope;
    case 1: return Label::Hope;
    default: throw std::out_of_range("label index out of range: " + std::to_string(index));
  }
}

std::optional<Label> parse_label(std::string_view text) {
  std::string canon;
  bool pending_space = false;
  for (char c : trim(text)) {
    if (c == ' ' || c == '\t') {
      pending_space = true;
      continue;
    }
    if (pending_space) canon.push_back(' ');
    pending_space = false;
    canon.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (canon == "hope") return Label::Hope;
  if (canon == "not hope") return Label::NotHope;
  return std::nullopt;
}

std::string_view to_string(SplitName name) noexcept {
  switch (name) {
    case SplitName::Train: return "train";
    case SplitName::Dev: return "dev";
    case SplitName::Test: return "test";
  }
  return "?";
}

SplitName parse_split_name(std::string_view text) {
  if (text == "train") return SplitName::Train;
  if (text == "dev") return SplitName::Dev;
  if (text == "test") return SplitName::Test;
  throw std::invalid_argument("unknown split name '" + std::string(text) +
                              "' (expected train, dev or test)");
}

UnknownLabelError::UnknownLabelError(std::string id, std::string value)
    : CorpusError("instance '" + id + "': unknown label '" + value +
                  "' (expected 'Hope' or 'Not Hope')"),
      id_(std::move(id)),
      value_(std::move(value)) {}

DuplicateIdError::DuplicateIdError(std::string id)
    : CorpusError("duplicate instance id '" + id + "'"), id_(std::move(id)) {}

DatasetSplit::DatasetSplit(SplitName name, std::vector<TextInstance> instances)
    : name_(name), instances_(std::move(instances)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(instances_.size());
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    const auto& inst = instances_[i];
    if (inst.id.empty()) {
      throw MalformedRowError("instance #" + std::to_string(i) + " has an empty id");
    }
    if (!seen.insert(inst.id).second) throw DuplicateIdError(inst.id);
  }
}

bool DatasetSplit::fully_labeled() const noexcept {
  return std::all_of(instances_.begin(), instances_.end(),
                     [](const TextInstance& t) { return t.label.has_value(); });
}

bool DatasetSplit::any_labeled() const noexcept {
  return std::any_of(instances_.begin(), instances_.end(),
                     [](const TextInstance& t) { return t.label.has_value(); });
}

DatasetSplit parse_split(std::string_view content, SplitName name, bool require_labels,
                         char delimiter, std::string_view source_name) {
  const std::string src(source_name);
  std::vector<csv::Row> rows;
  try {
    rows = csv::parse(content, delimiter);
  } catch (const csv::ParseError& e) {
    throw MalformedRowError(src + ": " + e.what());
  }
  if (rows.empty()) {
    if (require_labels) throw MissingLabelError(src + ": empty file has no label column");
    return DatasetSplit(name, {});
  }

  const auto& header = rows.front().fields;
  const auto column = [&](std::string_view col) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (trim(header[k]) == col) return k;
    }
    return std::nullopt;
  };
  const auto id_col = column("id");
  const auto text_col = column("text");
  const auto label_col = column("label");
  if (!id_col || !text_col) {
    throw MalformedRowError(src + ": header must contain 'id' and 'text' columns");
  }
  if (require_labels && !label_col) {
    throw MissingLabelError(src + ": labels required but the header has no 'label' column");
  }

  std::vector<TextInstance> instances;
  instances.reserve(rows.size() - 1);
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != header.size()) {
      throw MalformedRowError(src + ":" + std::to_string(row.line) + ": expected " +
                              std::to_string(header.size()) + " columns, found " +
                              std::to_string(row.fields.size()));
    }
    TextInstance inst;
    inst.id = std::string(trim(row.fields[*id_col]));
    inst.text = row.fields[*text_col];
    if (inst.id.empty()) {
      throw MalformedRowError(src + ":" + std::to_string(row.line) + ": empty id");
    }
    if (!seen.insert(inst.id).second) throw DuplicateIdError(inst.id);
    if (label_col) {
      const std::string& raw = row.fields[*label_col];
      if (trim(raw).empty()) {
        if (require_labels) {
          throw MissingLabelError(src + ":" + std::to_string(row.line) + ": instance '" +
                                  inst.id + "' has no label");
        }
      } else {
        auto label = parse_label(raw);
        if (!label) throw UnknownLabelError(inst.id, raw);
        inst.label = *label;
      }
    }
    instances.push_back(std::move(inst));
  }
  return DatasetSplit(name, std::move(instances));
}

DatasetSplit load_split(const std::filesystem::path& path, SplitName name, bool require_labels) {
  std::string content;
  try {
    content = read_file(path);
  } catch (const IoError& e) {
    throw MissingFileError(e.what());
  }
  return parse_split(content, name, require_labels, csv::delimiter_for(path.filename().string()),
                     path.string());
}

std::string serialize_split(const DatasetSplit& split, char delimiter) {
  const bool with_labels = split.any_labeled();
  std::string out;
  std::vector<std::string> fields =
      with_labels ? std::vector<std::string>{"id", "text", "label"}
                  : std::vector<std::string>{"id", "text"};
  csv::append_record(out, fields, delimiter);
  for (const auto& inst : split.instances()) {
    fields[0] = inst.id;
    fields[1] = inst.text;
    if (with_labels) fields[2] = inst.label ? std::string(to_string(*inst.label)) : "";
    csv::append_record(out, fields, delimiter);
  }
  return out;
}

ClassCounts split_statistics(const DatasetSplit& split) noexcept {
  ClassCounts c;
  c.total = split.size();
  for (const auto& inst : split.instances()) {
    if (!inst.label) continue;
    if (*inst.label == Label::Hope) {
      ++c.hope;
    } else {
      ++c.not_hope;
    }
  }
  return c;
}

VerificationReport verify_expected_counts(const ClassCounts& stats, const ClassCounts& expected) {
  VerificationReport rep;
  rep.actual = stats;
  rep.expected = expected;
  const auto check = [&](std::string_view field, std::size_t a, std::size_t e) {
    if (a != e) rep.diffs.push_back({std::string(field), a, e});
  };
  check("total", stats.total, expected.total);
  check("hope", stats.hope, expected.hope);
  check("not_hope", stats.not_hope, expected.not_hope);
  rep.passed = rep.diffs.empty();
  return rep;
}

KeyValueDoc VerificationReport::to_key_value(std::string_view prefix) const {
  const std::string p(prefix);
  KeyValueDoc doc;
  doc.set(p + "status", passed ? "pass" : "fail");
  doc.set(p + "actual.total", actual.total);
  doc.set(p + "actual.hope", actual.hope);
  doc.set(p + "actual.not_hope", actual.not_hope);
  doc.set(p + "expected.total", expected.total);
  doc.set(p + "expected.hope", expected.hope);
  doc.set(p + "expected.not_hope", expected.not_hope);
  for (const auto& d : diffs) {
    doc.set(p + "diff." + d.field,
            static_cast<long long>(d.actual) - static_cast<long long>(d.expected));
  }
  return doc;
}

namespace {

// Test splits were distributed without labels.
constexpr std::array<ReferenceCounts, 6> kReferenceCounts{{
    {"polyhope-en-train", {4541, 2296, 2245}},
    {"polyhope-en-dev", {1650, 834, 816}},
    {"polyhope-en-test", {2065, 0, 0}},
    {"polyhope-de-train", {11573, 4924, 6649}},
    {"polyhope-de-dev", {4208, 1790, 2418}},
    {"polyhope-de-test", {5262, 0, 0}},
}};

}  // namespace

std::span<const ReferenceCounts> reference_counts() noexcept { return kReferenceCounts; }

std::optional<ClassCounts> find_reference_counts(std::string_view name) noexcept {
  for (const auto& r : kReferenceCounts) {
    if (r.name == name) return r.counts;
  }
  return std::nullopt;
}

}  // namespace hope
