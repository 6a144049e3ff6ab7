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

#ifndef NEWSGAUGE_ASSEMBLER_H_
#define NEWSGAUGE_ASSEMBLER_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "newsgauge/corpus_model.h"

namespace newsgauge {

// How the total-duration bound is measured.
enum class DurationMode {
  kSpeechSum,  // sum of member durations (gaps excluded)
  kSpan,       // wall-clock span from first start to last end
};

struct AssemblyConfig {
  double max_gap_s = 10.0;
  double max_total_s = 60.0;
  DurationMode duration_mode = DurationMode::kSpeechSum;

  // Throws ValidationError unless both bounds are strictly positive.
  void validate() const;
};

// Greedy left-to-right merge over one program. The next utterance joins the
// open dialogue iff its gap to the dialogue end is < max_gap_s and the
// resulting duration is < max_total_s; otherwise it opens a new dialogue.
// Dialogue ids are "<program_id>:<index of first member in the program>".
//
// Input must be a single program, sorted and non-overlapping; violations
// throw ValidationError.
std::vector<Dialogue> assemble_dialogues(std::span<const Utterance> utterances,
                                         const AssemblyConfig& cfg);

// Runs assemble_dialogues per program over a normalized corpus (utterances
// grouped by program, e.g. parse_transcripts output). `jobs` caps worker
// threads; output order is program order regardless of `jobs`.
std::vector<Dialogue> assemble_corpus(std::span<const Utterance> utterances,
                                      const AssemblyConfig& cfg,
                                      unsigned jobs = 1);

// Member texts trimmed and joined by a single space, in member order.
// Throws ValidationError if a member id is absent from `utterances`.
std::string dialogue_text(const Dialogue& dialogue,
                          std::span<const Utterance> utterances);

std::string write_dialogues_jsonl(std::span<const Dialogue> dialogues);
std::vector<Dialogue> read_dialogues_jsonl(std::string_view bytes,
                                           std::string_view source =
                                               "dialogues");

}  // namespace newsgauge

#endif  // NEWSGAUGE_ASSEMBLER_H_
