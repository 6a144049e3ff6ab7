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

#ifndef NEWSGAUGE_CLI_H_
#define NEWSGAUGE_CLI_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "newsgauge/analytics.h"
#include "newsgauge/annotator.h"
#include "newsgauge/assembler.h"
#include "newsgauge/metrics.h"

namespace newsgauge {

enum class AnnotateProtocol {
  kChat,      // OpenAI-style chat completions (teacher)
  kClassify,  // /classify + /health (served student)
};

AnnotateProtocol parse_protocol(std::string_view name);
std::string_view to_string(AnnotateProtocol protocol);

// One run configuration document. Every key is optional; unknown keys are
// rejected at every level. Flags given on the command line win.
struct RunConfig {
  struct Paths {
    std::optional<std::string> taxonomy;
    std::optional<std::string> channels;
    std::optional<std::string> fewshot;
    std::optional<std::string> transcripts;
    std::optional<std::string> dialogues;
    std::optional<std::string> labels;
    std::optional<std::string> annotations;
    std::optional<std::string> annotation_columns;
    std::optional<std::string> gender_spans;
    std::optional<std::string> gender_offsets;
    std::optional<std::string> out;
  } paths;

  TranscriptFormat transcript_format = TranscriptFormat::kUtteranceJsonl;
  AssemblyConfig assembly;
  AnnotateProtocol protocol = AnnotateProtocol::kChat;
  ClientConfig client;
  ClassifierConfig classifier;
  EvaluationOptions evaluation;
  std::string split = "all";  // all, dev or test
  double test_fraction = 0.7525;
  std::uint64_t split_seed = 42;
  GroupBy group_by = GroupBy::kNone;
  DisparityMode disparity = DisparityMode::kParityDifference;
  unsigned jobs = 1;

  static RunConfig FromJson(std::string_view json);
  // Throws ValidationError on the first bad value.
  void validate() const;
  // Everything except secrets; used for the manifest config hash.
  nlohmann::json to_json() const;
};

// Runs one subcommand and returns the process exit code: 0 on success, 1 on
// validation errors (bad flags, bad input), 2 on runtime failures.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace newsgauge

#endif  // NEWSGAUGE_CLI_H_
