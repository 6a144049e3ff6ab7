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

#ifndef NEWSGAUGE_DEFAULTS_H_
#define NEWSGAUGE_DEFAULTS_H_

#include <string_view>

namespace newsgauge {

// Contents of data/taxonomy.json and data/fewshot.json at build time.
std::string_view default_taxonomy_json();
std::string_view default_fewshot_json();

}  // namespace newsgauge

#endif  // NEWSGAUGE_DEFAULTS_H_
