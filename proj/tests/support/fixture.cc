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

#include "fixture.h"

#include <fmt/format.h>
#include <unistd.h>

#include "json.hpp"
#include "newsgauge/csv.h"
#include "newsgauge/io.h"

namespace newsgauge::fixture {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kPrograms = 6;
constexpr int kPerProgram = 100;
constexpr double kSpeech = 10.0;
constexpr double kStride = 30.0;

struct Planted {
  const char* text;
  const char* label;
  double parity;
};

constexpr Planted kTopics[3] = {
    {"et maintenant la météo : soleil sur la Bretagne, averses dans le nord",
     "météo", kWeatherParity},
    {"résultats du football ce soir, le championnat reprend samedi", "sport",
     kSportParity},
    {"le gouvernement présente sa réforme au parlement cette semaine",
     "politique", kPoliticsParity},
};

}  // namespace

fs::path TempDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() /
                 fmt::format("newsgauge_{}_{}", name, static_cast<long>(getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

PlantedCorpus WritePlantedCorpus(const fs::path& dir) {
  PlantedCorpus c;
  c.dir = dir;
  c.utterances = dir / "utterances.jsonl";
  c.gender_spans = dir / "gender";
  c.channels = dir / "channels.json";
  c.annotations = dir / "annotations.csv";
  fs::create_directories(c.gender_spans);

  std::string utts;
  CsvWriter gold({"dialogue_id", "annotator_id", "topics", "scope",
                  "flag_ukraine", "flag_israel_hamas", "flag_mixed"});
  const char* channels[3] = {"pub_tv", "priv_radio", "priv_tv"};
  for (int p = 0; p < kPrograms; ++p) {
    std::string program = fmt::format("prog{}", p);
    std::string spans = "labels,start,stop\n";
    for (int i = 0; i < kPerProgram; ++i) {
      const Planted& topic = kTopics[(i + p) % 3];
      double start = kStride * i;
      double split = start + kSpeech * topic.parity;
      json u = {{"utt_id", fmt::format("{}#{}", program, i)},
                {"channel_id", channels[p % 3]},
                {"program_id", program},
                {"start_s", start},
                {"end_s", start + kSpeech},
                {"text", fmt::format("{} (sujet {} de {})", topic.text, i, program)}};
      utts += u.dump() + "\n";
      spans += fmt::format("female,{},{}\n", start, split);
      spans += fmt::format("male,{},{}\n", split, start + kSpeech);
      spans += fmt::format("music,{},{}\n", start + kSpeech, start + kSpeech + 5);
      if (i < 20) {
        std::string id = fmt::format("{}:{}", program, i);
        std::string b_topics = topic.label;
        if (i % 5 == 0) b_topics += ";société";
        gold.add_row({id, "A", topic.label, "national", "0", "0", "0"});
        gold.add_row({id, "B", b_topics, "national", "0", "0", "0"});
      }
      ++c.n_dialogues;
    }
    write_file(c.gender_spans / (program + ".csv"), spans);
  }
  write_file(c.utterances, utts);
  write_file(c.annotations, gold.str());
  json reg = json::array({
      {{"channel_id", "pub_tv"}, {"medium", "tv"}, {"ownership", "public"}},
      {{"channel_id", "priv_radio"}, {"medium", "radio"}, {"ownership", "private"}},
      {{"channel_id", "priv_tv"}, {"medium", "tv"}, {"ownership", "private"}},
  });
  write_file(c.channels, reg.dump(2));
  return c;
}

mock::MockConfig PlantedMockConfig() {
  mock::MockConfig cfg;
  cfg.rules = {
      {"météo", {200, R"(["météo"])"}},
      {"football", {200, R"(Voici : ["sport"])"}},
      {"gouvernement", {200, "```json\n[\"politique\"]\n```"}},
  };
  cfg.fallback = {200, R"(["autre"])"};
  return cfg;
}

std::vector<std::vector<std::string>> ReadCsv(const fs::path& path) {
  std::vector<std::vector<std::string>> out;
  for (auto& row : parse_csv(read_file(path))) out.push_back(std::move(row.fields));
  return out;
}

}  // namespace newsgauge::fixture
