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

#include "doctest.h"
#include "mock/mock_server.h"
#include "newsgauge/assembler.h"
#include "newsgauge/cli.h"
#include "newsgauge/error.h"
#include "newsgauge/io.h"
#include "newsgauge/report.h"
#include "support/fixture.h"

namespace newsgauge {
namespace {

namespace fs = std::filesystem;
using Args = std::vector<std::string>;

int Run(Args args) {
  args.insert(args.begin(), "newsgauge");
  return run(args);
}

TEST_CASE("assemble writes dialogues") {
  fs::path dir = fixture::TempDir("cli_assemble");
  write_file(dir / "u.jsonl",
             "{\"utt_id\":\"a\",\"channel_id\":\"c\",\"program_id\":\"p\",\"start_s\":0,\"end_s\":5,\"text\":\"un\"}\n"
             "{\"utt_id\":\"b\",\"channel_id\":\"c\",\"program_id\":\"p\",\"start_s\":12,\"end_s\":16,\"text\":\"deux\"}\n"
             "{\"utt_id\":\"c\",\"channel_id\":\"c\",\"program_id\":\"p\",\"start_s\":30,\"end_s\":34,\"text\":\"trois\"}\n");
  CHECK(Run({"assemble", "--in", (dir / "u.jsonl").string(), "--out",
             (dir / "d.jsonl").string()}) == 0);
  auto ds = read_dialogues_jsonl(read_file(dir / "d.jsonl"));
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].text == "un deux");

  CHECK(Run({"assemble", "--in", (dir / "u.jsonl").string(), "--out",
             (dir / "d2.jsonl").string(), "--max-gap-s", "20"}) == 0);
  CHECK(read_dialogues_jsonl(read_file(dir / "d2.jsonl")).size() == 1);
}

TEST_CASE("exit codes") {
  fs::path dir = fixture::TempDir("cli_exit");
  CHECK(Run({"assemble", "--bogus"}) == 1);
  CHECK(Run({"frobnicate"}) == 1);
  CHECK(Run({}) == 1);
  CHECK(Run({"--help"}) == 0);
  CHECK(Run({"assemble", "--in", "x.jsonl"}) == 1);  // no --out
  CHECK(Run({"assemble", "--in", (dir / "missing.jsonl").string(), "--out",
             (dir / "o.jsonl").string()}) == 2);
  CHECK(Run({"assemble", "--in", "a", "--out", "b", "--max-gap-s", "-1"}) == 1);
  write_file(dir / "bad.jsonl", "{not json\n");
  CHECK(Run({"assemble", "--in", (dir / "bad.jsonl").string(), "--out",
             (dir / "o.jsonl").string()}) == 1);
}

TEST_CASE("config documents reject unknown keys and lose to flags") {
  CHECK_THROWS_AS(RunConfig::FromJson(R"({"assembly":{"max_gap":3}})"), ValidationError);
  CHECK_THROWS_AS(RunConfig::FromJson(R"({"colour":"red"})"), ValidationError);
  CHECK_THROWS_AS(RunConfig::FromJson(R"({"jobs":"many"})"), ValidationError);
  RunConfig c = RunConfig::FromJson(
      R"({"assembly":{"max_gap_s":3,"duration_mode":"span"},"client":{"max_in_flight":2},
          "analysis":{"group_by":"medium"},"paths":{"out":"x"}})");
  CHECK(c.assembly.max_gap_s == 3);
  CHECK(c.assembly.duration_mode == DurationMode::kSpan);
  CHECK(c.client.max_in_flight == 2);
  CHECK(c.group_by == GroupBy::kMedium);
  CHECK(c.paths.out == "x");
  CHECK(RunConfig::FromJson(c.to_json().dump()).to_json() == c.to_json());

  fs::path dir = fixture::TempDir("cli_config");
  write_file(dir / "u.jsonl",
             "{\"utt_id\":\"a\",\"channel_id\":\"c\",\"program_id\":\"p\",\"start_s\":0,\"end_s\":5,\"text\":\"un\"}\n"
             "{\"utt_id\":\"b\",\"channel_id\":\"c\",\"program_id\":\"p\",\"start_s\":12,\"end_s\":16,\"text\":\"deux\"}\n");
  write_file(dir / "cfg.json", R"({"assembly":{"max_gap_s":5}})");
  CHECK(Run({"assemble", "--config", (dir / "cfg.json").string(), "--in",
             (dir / "u.jsonl").string(), "--out", (dir / "a.jsonl").string()}) == 0);
  CHECK(read_dialogues_jsonl(read_file(dir / "a.jsonl")).size() == 2);
  CHECK(Run({"assemble", "--config", (dir / "cfg.json").string(), "--max-gap-s", "10",
             "--in", (dir / "u.jsonl").string(), "--out", (dir / "b.jsonl").string()}) == 0);
  CHECK(read_dialogues_jsonl(read_file(dir / "b.jsonl")).size() == 1);
  write_file(dir / "bad.json", R"({"assembly":{"gap":5}})");
  CHECK(Run({"assemble", "--config", (dir / "bad.json").string(), "--in",
             (dir / "u.jsonl").string(), "--out", (dir / "c.jsonl").string()}) == 1);
}

TEST_CASE("stage-by-stage run matches the pipeline") {
  fs::path dir = fixture::TempDir("cli_stages");
  auto corpus = fixture::WritePlantedCorpus(dir / "in");
  mock::MockServer server(fixture::PlantedMockConfig());
  std::string url = server.start();
  const std::string in = corpus.utterances.string();
  const std::string d = (dir / "dialogues.jsonl").string();
  const std::string s = (dir / "synthetic.jsonl").string();

  REQUIRE(Run({"ingest", "--in", in, "--out", (dir / "u.jsonl").string()}) == 0);
  REQUIRE(Run({"assemble", "--in", (dir / "u.jsonl").string(), "--out", d}) == 0);
  REQUIRE(Run({"annotate", "--in", d, "--out", s, "--endpoint", url,
               "--concurrency", "4"}) == 0);
  REQUIRE(Run({"export-train", "--in", s, "--out", (dir / "train.jsonl").string()}) == 0);
  REQUIRE(Run({"evaluate", "--gold", corpus.annotations.string(), "--pred", s,
               "--bootstrap", "100", "--out", (dir / "scores.json").string()}) == 0);
  CHECK(fs::exists(dir / "scores_by_topic.csv"));
  REQUIRE(Run({"agreement", "--annotations", corpus.annotations.string(),
               "--dialogues", d, "--out", (dir / "agreement.csv").string(),
               "--json-out", (dir / "agreement.json").string()}) == 0);
  REQUIRE(Run({"analyze", "--dialogues", d, "--labels", s, "--gender-spans",
               corpus.gender_spans.string(), "--channels", corpus.channels.string(),
               "--group-by", "ownership", "--out", (dir / "analysis").string()}) == 0);
  REQUIRE(Run({"report", "--analytics", (dir / "analysis" / "analytics.json").string(),
               "--scores", (dir / "scores.json").string(), "--agreement",
               (dir / "agreement.json").string(), "--out",
               (dir / "report").string()}) == 0);

  REQUIRE(Run({"pipeline", "--in", in, "--endpoint", url, "--gold",
               corpus.annotations.string(), "--bootstrap", "100", "--gender-spans",
               corpus.gender_spans.string(), "--channels", corpus.channels.string(),
               "--group-by", "ownership", "--out", (dir / "pipe").string()}) == 0);
  for (auto name : kReportFiles) {
    if (name == "run_manifest.json") continue;
    CAPTURE(name);
    CHECK(read_file(dir / "report" / name) == read_file(dir / "pipe" / name));
  }
  CHECK(read_file(dir / "pipe" / "dialogues.jsonl") == read_file(d));

  auto rows = fixture::ReadCsv(dir / "pipe" / "parity_by_topic.csv");
  // all, private, public groups x 3 planted topics
  CHECK(rows.size() == 1 + 9);
  auto scores = nlohmann::json::parse(read_file(dir / "pipe" / "scores.json"));
  CHECK(scores["n_dialogues"] == 120);
  CHECK(scores["micro"]["precision"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("pipeline with precomputed predictions and the classify protocol") {
  fs::path dir = fixture::TempDir("cli_classify");
  auto corpus = fixture::WritePlantedCorpus(dir / "in");
  mock::MockConfig mc = fixture::PlantedMockConfig();
  mc.taxonomy_fingerprint = Taxonomy::Builtin().fingerprint();
  mc.rules = {{"météo", {200, R"(["weather"])"}},
              {"football", {200, R"(["sport"])"}},
              {"gouvernement", {200, R"(["politics"])"}}};
  mock::MockServer server(mc);
  std::string url = server.start();
  REQUIRE(Run({"pipeline", "--in", corpus.utterances.string(), "--protocol",
               "classify", "--endpoint", url, "--gender-spans",
               corpus.gender_spans.string(), "--out", (dir / "a").string()}) == 0);
  REQUIRE(Run({"pipeline", "--in", corpus.utterances.string(), "--predictions",
               (dir / "a" / "labels.jsonl").string(), "--gender-spans",
               corpus.gender_spans.string(), "--out", (dir / "b").string()}) == 0);
  CHECK(read_file(dir / "a" / "parity_by_topic.csv") ==
        read_file(dir / "b" / "parity_by_topic.csv"));
  auto rows = fixture::ReadCsv(dir / "a" / "parity_by_topic.csv");
  CHECK(rows.size() == 4);
}

}  // namespace
}  // namespace newsgauge
