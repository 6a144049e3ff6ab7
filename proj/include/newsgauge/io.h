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

#ifndef NEWSGAUGE_IO_H_
#define NEWSGAUGE_IO_H_

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace newsgauge {

// Whole-file helpers. Failures throw Error naming the path.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

std::string sha256_hex(std::string_view bytes);

// Calls `fn(line, line_number)` for every line (1-based), without the
// trailing '\n' or '\r'. Blank lines are skipped.
void for_each_line(std::string_view bytes,
                   const std::function<void(std::string_view, std::size_t)>& fn);

std::string_view trim(std::string_view s);

}  // namespace newsgauge

#endif  // NEWSGAUGE_IO_H_
