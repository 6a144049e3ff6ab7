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

#ifndef NEWSGAUGE_TESTS_SUPPORT_FIXTURE_H_
#define NEWSGAUGE_TESTS_SUPPORT_FIXTURE_H_

#include <filesystem>
#include <string>
#include <vector>

#include "mock/mock_server.h"

namespace newsgauge::fixture {

// Planted-bias corpus: 6 programs x 100 one-utterance dialogues cycling
// through weather, sport and politics (200 each). Each dialogue carries
// 10 s of speech split female/male at the topic's constructed parity, so
//   weather 0.52, sport 0.20, politics 0.48  ->  global 0.40.
// Gaps hold music spans, which must not count as gendered speech.
struct PlantedCorpus {
  std::filesystem::path dir;
  std::filesystem::path utterances;    // utterances.jsonl
  std::filesystem::path gender_spans;  // directory of <program>.csv
  std::filesystem::path channels;      // channels.json
  std::filesystem::path annotations;   // gold for 120 dialogues
  std::size_t n_dialogues = 0;
};

inline constexpr double kGlobalParity = 0.40;
inline constexpr double kWeatherParity = 0.52;
inline constexpr double kSportParity = 0.20;
inline constexpr double kPoliticsParity = 0.48;

PlantedCorpus WritePlantedCorpus(const std::filesystem::path& dir);

// Chat replies keyed on the planted topic words.
mock::MockConfig PlantedMockConfig();

// Fresh empty directory under the system temp dir.
std::filesystem::path TempDir(const std::string& name);

// Minimal CSV reader for report assertions: rows of fields, header first.
std::vector<std::vector<std::string>> ReadCsv(const std::filesystem::path& path);

}  // namespace newsgauge::fixture

#endif  // NEWSGAUGE_TESTS_SUPPORT_FIXTURE_H_
