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

#ifndef NEWSGAUGE_CSV_H_
#define NEWSGAUGE_CSV_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace newsgauge {

struct CsvRow {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

// RFC 4180 reader: quoted fields may hold delimiters, doubled quotes and
// newlines. Blank records are skipped. Throws ParseError on an unterminated
// quote.
std::vector<CsvRow> parse_csv(std::string_view bytes, char delimiter = ',',
                              std::string_view source = "csv");

// Guesses ',' or '\t' from the first line.
char sniff_delimiter(std::string_view bytes);

std::string csv_escape(std::string_view field);

// Accumulates rows, quoting only fields that need it.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(const std::vector<std::string>& fields);
  const std::string& str() const { return out_; }

 private:
  void append(const std::vector<std::string>& fields);

  std::size_t width_;
  std::string out_;
};

}  // namespace newsgauge

#endif  // NEWSGAUGE_CSV_H_
