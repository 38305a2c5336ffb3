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

#include "hope/csv.hpp"

namespace hope::csv {

std::vector<Row> parse(std::string_view text, char delimiter) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<Row> rows;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();

  while (i < n) {
    if (text[i] == '\n') {
      ++line, ++i;
      continue;
    }
    if (text[i] == '\r' && i + 1 < n && text[i + 1] == '\n') {
      ++line, i += 2;
      continue;
    }

    Row row;
    row.line = line;
    std::string field;
    bool done = false;
    while (!done) {
      field.clear();
      if (i < n && text[i] == '"') {
        ++i;
        for (;;) {
          if (i >= n) throw ParseError(row.line, "unterminated quoted field");
          const char c = text[i];
          if (c == '"') {
            if (i + 1 < n && text[i + 1] == '"') {
              field.push_back('"');
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          if (c == '\n') ++line;
          field.push_back(c);
          ++i;
        }
        if (i < n && text[i] != delimiter && text[i] != '\n' &&
            !(text[i] == '\r' && i + 1 < n && text[i + 1] == '\n')) {
          throw ParseError(line, "unexpected character after closing quote");
        }
      } else {
        while (i < n && text[i] != delimiter && text[i] != '\n' &&
               !(text[i] == '\r' && i + 1 < n && text[i + 1] == '\n')) {
          if (text[i] == '"') throw ParseError(line, "stray quote in unquoted field");
          field.push_back(text[i]);
          ++i;
        }
      }
      row.fields.push_back(field);

      if (i >= n) {
        done = true;
      } else if (text[i] == delimiter) {
        ++i;
      } else {
        i += text[i] == '\r' ? 2 : 1;
        ++line;
        done = true;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void append_record(std::string& out, std::span<const std::string> fields, char delimiter) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) out.push_back(delimiter);
    const std::string& f = fields[k];
    const bool quote = f.empty() ? fields.size() == 1
                                 : f.find_first_of(std::string{delimiter, '"', '\n', '\r'}) !=
                                       std::string::npos;
    if (!quote) {
      out += f;
      continue;
    }
    out.push_back('"');
    for (char c : f) {
      if (c == '"') out.push_back('"');
      out.push_back(c);
    }
    out.push_back('"');
  }
  out.push_back('\n');
}

char delimiter_for(std::string_view filename) noexcept {
  return filename.ends_with(".tsv") ? '\t' : ',';
}

}  // namespace hope::csv
