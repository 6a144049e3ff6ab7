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

#ifndef NEWSGAUGE_INGEST_H_
#define NEWSGAUGE_INGEST_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "newsgauge/corpus_model.h"

namespace newsgauge {

// ---------------------------------------------------------------------------
// Transcripts

enum class TranscriptFormat {
  // One utterance object per line:
  // {utt_id, channel_id, program_id, start_s, end_s, text}
  kUtteranceJsonl,
  // ASR output: an object {channel_id, program_id, segments: [{start, end,
  // text}, ...]} or an array of such objects. utt_ids are generated as
  // "<program_id>#<segment index>".
  kAsrSegmentsJson,
};

// Accepts "utterance_jsonl" and "asr_segments_json"; throws ValidationError
// otherwise.
TranscriptFormat parse_transcript_format(std::string_view tag);

struct IngestReport {
  std::size_t records = 0;
  std::size_t dropped_empty_text = 0;
  std::size_t dropped_bad_duration = 0;
  std::size_t truncated_overlaps = 0;

  std::size_t dropped() const {
    return dropped_empty_text + dropped_bad_duration;
  }
};

struct TranscriptIngest {
  std::vector<Utterance> utterances;
  IngestReport report;
};

// Parses transcripts and normalizes them: sorted by (program_id, start_s),
// empty or non-positive segments dropped, and overlaps within a program
// repaired by truncating the earlier segment to the later one's start.
TranscriptIngest parse_transcripts(std::string_view bytes,
                                   TranscriptFormat format,
                                   std::string_view source = "transcripts");

// Sort + drop + overlap repair on already-built utterances. Exposed so
// callers that build utterances in memory get the same guarantees.
TranscriptIngest normalize_utterances(std::vector<Utterance> utterances);

std::string write_utterances_jsonl(std::span<const Utterance> utterances);

// ---------------------------------------------------------------------------
// Gender segmentation

enum class SpanLabel { kMale, kFemale, kMusic, kNoise, kOther };

std::string_view to_string(SpanLabel label);

struct GenderSpan {
  std::string media_id;
  SpanLabel label = SpanLabel::kOther;
  double start_s = 0.0;
  double end_s = 0.0;

  bool is_speech_gender() const {
    return label == SpanLabel::kMale || label == SpanLabel::kFemale;
  }
  friend bool operator==(const GenderSpan&, const GenderSpan&) = default;
};

// Column names looked up in the header row.
struct GenderCsvColumns {
  std::string label = "labels";
  std::string start = "start";
  std::string stop = "stop";
};

// Parses a segmenter CSV (comma or tab separated, header required). Labels
// outside {male, female, music, noise} map to kOther. `offset_s` is added to
// every time to realign desynchronized media. Rows come back sorted by start,
// with overlaps truncated like transcripts.
std::vector<GenderSpan> parse_gender_spans(std::string_view bytes,
                                           std::string_view media_id,
                                           const GenderCsvColumns& columns = {},
                                           double offset_s = 0.0);

// ---------------------------------------------------------------------------
// Human annotations

enum class Scope { kLocal, kNational, kEuropean, kInternational };

std::string_view to_string(Scope scope);

struct HumanAnnotation {
  std::string dialogue_id;
  std::string annotator_id;
  TopicSet topics;
  Scope scope = Scope::kNational;
  bool flag_ukraine = false;
  bool flag_israel_hamas = false;
  bool flag_mixed_subjects = false;
};

// Header names of the annotation CSV. The defaults match the documented
// layout; other exports (e.g. the released annotated corpus) are read by
// supplying a mapping, see AnnotationColumns::FromJson.
struct AnnotationColumns {
  std::string dialogue_id = "dialogue_id";
  std::string annotator_id = "annotator_id";
  std::string topics = "topics";
  std::string scope = "scope";
  std::string flag_ukraine = "flag_ukraine";
  std::string flag_israel_hamas = "flag_israel_hamas";
  std::string flag_mixed = "flag_mixed";
  char topic_separator = ';';

  // Object with any subset of the fields above; unknown keys are rejected.
  static AnnotationColumns FromJson(std::string_view json);
};

// Reads the annotation CSV. Topic surface forms go through canonical_topic;
// an unmapped value is a ValidationError naming the dialogue and the value.
std::vector<HumanAnnotation> load_annotations(
    std::string_view bytes, const Taxonomy& taxonomy,
    const AnnotationColumns& columns = {},
    std::string_view source = "annotations");

// Average annotator probability per topic; each value is 0, 0.5 or 1.
struct GoldMass {
  std::string dialogue_id;
  std::array<double, kNumTopics> mass{};

  double total() const;
};

// Requires exactly two annotations (from two distinct annotators) per
// dialogue. Output sorted by dialogue_id.
std::vector<GoldMass> build_gold_mass(std::span<const HumanAnnotation> annotations);

// ---------------------------------------------------------------------------
// Channels

class ChannelRegistry {
 public:
  ChannelRegistry() = default;

  // Throws ValidationError on duplicate channel ids.
  explicit ChannelRegistry(std::vector<ChannelMeta> channels);

  const ChannelMeta* find(std::string_view channel_id) const;
  std::size_t size() const { return channels_.size(); }
  const std::vector<ChannelMeta>& channels() const { return channels_; }

 private:
  std::vector<ChannelMeta> channels_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// JSON array of {channel_id, name, medium: tv|radio, ownership:
// public|private, news_cycle_24_7}.
ChannelRegistry load_channel_registry(std::string_view bytes,
                                      std::string_view source = "channels");

// ---------------------------------------------------------------------------
// Label files

// JSONL with one {dialogue_id, labels: [...]} per line (extra fields are
// ignored, so annotate output is accepted as-is). Labels are resolved through
// the taxonomy; unknown labels are a ParseError.
std::vector<LabelSet> read_label_sets(std::string_view bytes,
                                      const Taxonomy& taxonomy,
                                      std::string_view source = "labels");

std::string write_label_sets(std::span<const LabelSet> labels);

}  // namespace newsgauge

#endif  // NEWSGAUGE_INGEST_H_
