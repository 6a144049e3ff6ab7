// Copyright 2026 The NewsGauge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "newsgauge/csv.h"

#include "newsgauge/error.h"
#include "newsgauge/io.h"

namespace newsgauge {

std::vector<CsvRow> parse_csv(std::string_view bytes, char delimiter,
                              std::string_view source) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  std::size_t line = 1;
  row.line = 1;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&](std::size_t next_line) {
    end_field();
    bool blank = row.fields.size() == 1 && trim(row.fields[0]).empty();
    if (!blank) rows.push_back(std::move(row));
    row = CsvRow{};
    row.line = next_line;
  };

  // Skip a UTF-8 byte order mark.
  std::size_t i = 0;
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") i = 3;

  for (; i < bytes.size(); ++i) {
    char c = bytes[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < bytes.size() && bytes[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\r' && i + 1 < bytes.size() && bytes[i + 1] == '\n') {
      // handled by the '\n' branch
    } else if (c == '\n') {
      ++line;
      end_row(line);
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) {
    throw ParseError(std::string(source), row.line, "unterminated quoted field");
  }
  if (field_started || !field.empty() || !row.fields.empty()) end_row(line);
  return rows;
}

char sniff_delimiter(std::string_view bytes) {
  std::string_view first = bytes.substr(0, bytes.find('\n'));
  std::size_t tabs = 0, commas = 0;
  for (char c : first) {
    if (c == '\t') ++tabs;
    if (c == ',') ++commas;
  }
  return tabs > commas ? '\t' : ',';
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  append(header);
}

void CsvWriter::add_row(const std::vector<std::string>& fields) {
  if (fields.size() != width_) {
    throw Error("csv row has " + std::to_string(fields.size()) +
                " fields, header has " + std::to_string(width_));
  }
  append(fields);
}

void CsvWriter::append(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_.push_back(',');
    out_ += csv_escape(fields[i]);
  }
  out_.push_back('\n');
}

}  // namespace newsgauge
