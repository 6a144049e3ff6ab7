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

#include "newsgauge/ingest.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "json.hpp"
#include "newsgauge/csv.h"
#include "newsgauge/error.h"
#include "newsgauge/io.h"

namespace newsgauge {
namespace {

using nlohmann::json;

std::string GetString(const json& obj, const char* key, std::string_view source,
                      std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw ParseError(std::string(source), line,
                     std::string("missing string field '") + key + "'");
  }
  return it->get<std::string>();
}

double GetNumber(const json& obj, const char* key, std::string_view source,
                 std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw ParseError(std::string(source), line,
                     std::string("missing numeric field '") + key + "'");
  }
  double v = it->get<double>();
  if (!std::isfinite(v)) {
    throw ParseError(std::string(source), line,
                     std::string("non-finite value in '") + key + "'");
  }
  return v;
}

json ParseJson(std::string_view text, std::string_view source,
               std::size_t line) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    if (line == 0) {
      throw ParseError::AtOffset(std::string(source), e.byte, e.what());
    }
    throw ParseError(std::string(source), line, e.what());
  }
}

std::optional<double> ParseDouble(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::size_t RequireColumn(const std::vector<std::string>& header,
                          const std::string& name, std::string_view source) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == name) return i;
  }
  throw ParseError(std::string(source), 1, "missing column '" + name + "'");
}

const std::string& Field(const CsvRow& row, std::size_t col,
                         std::string_view source) {
  if (col >= row.fields.size()) {
    throw ParseError(std::string(source), row.line,
                     "expected at least " + std::to_string(col + 1) +
                         " fields, got " + std::to_string(row.fields.size()));
  }
  return row.fields[col];
}

bool ParseFlag(std::string_view value, std::string_view column,
               const CsvRow& row, std::string_view source) {
  value = trim(value);
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false" || value.empty()) return false;
  throw ParseError(std::string(source), row.line,
                   "flag '" + std::string(column) + "' must be 0 or 1, got '" +
                       std::string(value) + "'");
}

std::optional<Scope> ParseScope(std::string_view value) {
  std::string v = normalize_label(value);
  if (v == "local") return Scope::kLocal;
  if (v == "national") return Scope::kNational;
  if (v == "european" || v == "europeen") return Scope::kEuropean;
  if (v == "international") return Scope::kInternational;
  return std::nullopt;
}

SpanLabel ParseSpanLabel(std::string_view raw) {
  std::string v = normalize_label(raw);
  if (v == "male") return SpanLabel::kMale;
  if (v == "female") return SpanLabel::kFemale;
  if (v == "music") return SpanLabel::kMusic;
  if (v == "noise") return SpanLabel::kNoise;
  return SpanLabel::kOther;
}

}  // namespace

TranscriptFormat parse_transcript_format(std::string_view tag) {
  if (tag == "utterance_jsonl") return TranscriptFormat::kUtteranceJsonl;
  if (tag == "asr_segments_json") return TranscriptFormat::kAsrSegmentsJson;
  throw ValidationError("unknown transcript format '" + std::string(tag) +
                        "' (expected utterance_jsonl or asr_segments_json)");
}

TranscriptIngest normalize_utterances(std::vector<Utterance> utterances) {
  TranscriptIngest result;
  result.report.records = utterances.size();

  std::vector<Utterance> kept;
  kept.reserve(utterances.size());
  for (auto& u : utterances) {
    if (trim(u.text).empty()) {
      ++result.report.dropped_empty_text;
    } else if (!(u.end_s > u.start_s) || u.start_s < 0.0) {
      ++result.report.dropped_bad_duration;
    } else {
      kept.push_back(std::move(u));
    }
  }

  std::stable_sort(kept.begin(), kept.end(),
                   [](const Utterance& a, const Utterance& b) {
                     return std::tie(a.program_id, a.start_s, a.end_s, a.utt_id) <
                            std::tie(b.program_id, b.start_s, b.end_s, b.utt_id);
                   });

  // Truncating to the next start is enough: later segments start no earlier.
  std::vector<Utterance>& out = result.utterances;
  out.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    Utterance& u = kept[i];
    if (i + 1 < kept.size() && kept[i + 1].program_id == u.program_id &&
        kept[i + 1].start_s < u.end_s) {
      u.end_s = kept[i + 1].start_s;
      ++result.report.truncated_overlaps;
      if (!(u.end_s > u.start_s)) {
        ++result.report.dropped_bad_duration;
        continue;
      }
    }
    out.push_back(std::move(u));
  }
  return result;
}

TranscriptIngest parse_transcripts(std::string_view bytes,
                                   TranscriptFormat format,
                                   std::string_view source) {
  std::vector<Utterance> utterances;
  if (format == TranscriptFormat::kUtteranceJsonl) {
    for_each_line(bytes, [&](std::string_view line, std::size_t line_no) {
      json obj = ParseJson(line, source, line_no);
      if (!obj.is_object()) {
        throw ParseError(std::string(source), line_no, "expected a JSON object");
      }
      Utterance u;
      u.utt_id = GetString(obj, "utt_id", source, line_no);
      u.channel_id = GetString(obj, "channel_id", source, line_no);
      u.program_id = GetString(obj, "program_id", source, line_no);
      u.start_s = GetNumber(obj, "start_s", source, line_no);
      u.end_s = GetNumber(obj, "end_s", source, line_no);
      u.text = GetString(obj, "text", source, line_no);
      utterances.push_back(std::move(u));
    });
  } else {
    json doc = ParseJson(bytes, source, 0);
    std::vector<const json*> media;
    if (doc.is_array()) {
      for (const auto& m : doc) media.push_back(&m);
    } else {
      media.push_back(&doc);
    }
    for (std::size_t mi = 0; mi < media.size(); ++mi) {
      const json& m = *media[mi];
      std::string where = std::string(source) + "[" + std::to_string(mi) + "]";
      if (!m.is_object()) throw ParseError(where, 0, "expected a media object");
      std::string channel = GetString(m, "channel_id", where, 0);
      std::string program = GetString(m, "program_id", where, 0);
      auto segs = m.find("segments");
      if (segs == m.end() || !segs->is_array()) {
        throw ParseError(where, 0, "missing 'segments' array");
      }
      for (std::size_t si = 0; si < segs->size(); ++si) {
        const json& seg = (*segs)[si];
        std::string seg_where = where + ".segments[" + std::to_string(si) + "]";
        if (!seg.is_object()) throw ParseError(seg_where, 0, "expected an object");
        Utterance u;
        u.utt_id = program + "#" + std::to_string(si);
        u.channel_id = channel;
        u.program_id = program;
        u.start_s = GetNumber(seg, "start", seg_where, 0);
        u.end_s = GetNumber(seg, "end", seg_where, 0);
        u.text = GetString(seg, "text", seg_where, 0);
        utterances.push_back(std::move(u));
      }
    }
  }
  return normalize_utterances(std::move(utterances));
}

std::string write_utterances_jsonl(std::span<const Utterance> utterances) {
  std::string out;
  for (const Utterance& u : utterances) {
    json obj = {{"utt_id", u.utt_id},         {"channel_id", u.channel_id},
                {"program_id", u.program_id}, {"start_s", u.start_s},
                {"end_s", u.end_s},           {"text", u.text}};
    out += obj.dump(-1, ' ', false, json::error_handler_t::replace);
    out.push_back('\n');
  }
  return out;
}

std::string_view to_string(SpanLabel label) {
  switch (label) {
    case SpanLabel::kMale: return "male";
    case SpanLabel::kFemale: return "female";
    case SpanLabel::kMusic: return "music";
    case SpanLabel::kNoise: return "noise";
    case SpanLabel::kOther: return "other";
  }
  return "other";
}

std::vector<GenderSpan> parse_gender_spans(std::string_view bytes,
                                           std::string_view media_id,
                                           const GenderCsvColumns& columns,
                                           double offset_s) {
  std::string source = "gender spans " + std::string(media_id);
  std::vector<CsvRow> rows = parse_csv(bytes, sniff_delimiter(bytes), source);
  if (rows.empty()) throw ParseError(source, 1, "missing header row");

  const auto& header = rows.front().fields;
  std::size_t c_label = RequireColumn(header, columns.label, source);
  std::size_t c_start = RequireColumn(header, columns.start, source);
  std::size_t c_stop = RequireColumn(header, columns.stop, source);

  std::vector<GenderSpan> spans;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    auto start = ParseDouble(Field(row, c_start, source));
    auto stop = ParseDouble(Field(row, c_stop, source));
    if (!start || !stop) {
      throw ParseError(source, row.line, "non-numeric start/stop");
    }
    if (*start >= *stop) {
      throw ParseError(source, row.line, "start must be < stop");
    }
    spans.push_back(GenderSpan{std::string(media_id),
                               ParseSpanLabel(Field(row, c_label, source)),
                               *start + offset_s, *stop + offset_s});
  }

  std::stable_sort(spans.begin(), spans.end(),
                   [](const GenderSpan& a, const GenderSpan& b) {
                     return std::tie(a.start_s, a.end_s) <
                            std::tie(b.start_s, b.end_s);
                   });
  std::vector<GenderSpan> out;
  out.reserve(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    GenderSpan s = spans[i];
    if (i + 1 < spans.size() && spans[i + 1].start_s < s.end_s) {
      s.end_s = spans[i + 1].start_s;
      if (!(s.end_s > s.start_s)) continue;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string_view to_string(Scope scope) {
  switch (scope) {
    case Scope::kLocal: return "local";
    case Scope::kNational: return "national";
    case Scope::kEuropean: return "european";
    case Scope::kInternational: return "international";
  }
  return "national";
}

AnnotationColumns AnnotationColumns::FromJson(std::string_view text) {
  json doc = ParseJson(text, "annotation column mapping", 0);
  if (!doc.is_object()) {
    throw ValidationError("annotation column mapping: expected an object");
  }
  AnnotationColumns cols;
  const std::map<std::string, std::string*> fields = {
      {"dialogue_id", &cols.dialogue_id},
      {"annotator_id", &cols.annotator_id},
      {"topics", &cols.topics},
      {"scope", &cols.scope},
      {"flag_ukraine", &cols.flag_ukraine},
      {"flag_israel_hamas", &cols.flag_israel_hamas},
      {"flag_mixed", &cols.flag_mixed},
  };
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_string()) {
      throw ValidationError("annotation column mapping: '" + key +
                            "' must be a string");
    }
    if (key == "topic_separator") {
      std::string sep = value.get<std::string>();
      if (sep.size() != 1) {
        throw ValidationError(
            "annotation column mapping: topic_separator must be one character");
      }
      cols.topic_separator = sep[0];
      continue;
    }
    auto it = fields.find(key);
    if (it == fields.end()) {
      throw ValidationError("annotation column mapping: unknown key '" + key +
                            "'");
    }
    *it->second = value.get<std::string>();
  }
  return cols;
}

std::vector<HumanAnnotation> load_annotations(std::string_view bytes,
                                              const Taxonomy& taxonomy,
                                              const AnnotationColumns& columns,
                                              std::string_view source_view) {
  std::string source(source_view);
  std::vector<CsvRow> rows = parse_csv(bytes, sniff_delimiter(bytes), source);
  if (rows.empty()) throw ParseError(source, 1, "missing header row");

  const auto& header = rows.front().fields;
  std::size_t c_dialogue = RequireColumn(header, columns.dialogue_id, source);
  std::size_t c_annotator = RequireColumn(header, columns.annotator_id, source);
  std::size_t c_topics = RequireColumn(header, columns.topics, source);
  std::size_t c_scope = RequireColumn(header, columns.scope, source);
  std::size_t c_ukraine = RequireColumn(header, columns.flag_ukraine, source);
  std::size_t c_israel = RequireColumn(header, columns.flag_israel_hamas, source);
  std::size_t c_mixed = RequireColumn(header, columns.flag_mixed, source);

  std::vector<HumanAnnotation> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    HumanAnnotation a;
    a.dialogue_id = std::string(trim(Field(row, c_dialogue, source)));
    a.annotator_id = std::string(trim(Field(row, c_annotator, source)));
    if (a.dialogue_id.empty() || a.annotator_id.empty()) {
      throw ParseError(source, row.line, "empty dialogue_id or annotator_id");
    }

    std::string_view topics = Field(row, c_topics, source);
    std::size_t pos = 0;
    while (pos <= topics.size()) {
      std::size_t sep = topics.find(columns.topic_separator, pos);
      if (sep == std::string_view::npos) sep = topics.size();
      std::string_view raw = trim(topics.substr(pos, sep - pos));
      pos = sep + 1;
      if (raw.empty()) continue;
      auto topic = taxonomy.lookup(raw);
      if (!topic) {
        throw ParseError(source, row.line,
                         "dialogue " + a.dialogue_id + ": unknown topic '" +
                             std::string(raw) + "'");
      }
      a.topics.insert(*topic);
    }
    if (a.topics.empty()) {
      throw ParseError(source, row.line,
                       "dialogue " + a.dialogue_id + ": no topics");
    }

    const std::string& scope = Field(row, c_scope, source);
    if (trim(scope).empty()) {
      throw ParseError(source, row.line,
                       "dialogue " + a.dialogue_id + ": missing scope");
    }
    auto parsed_scope = ParseScope(scope);
    if (!parsed_scope) {
      throw ParseError(source, row.line,
                       "dialogue " + a.dialogue_id + ": unknown scope '" +
                           scope + "'");
    }
    a.scope = *parsed_scope;
    a.flag_ukraine = ParseFlag(Field(row, c_ukraine, source),
                               columns.flag_ukraine, row, source);
    a.flag_israel_hamas = ParseFlag(Field(row, c_israel, source),
                                    columns.flag_israel_hamas, row, source);
    a.flag_mixed_subjects = ParseFlag(Field(row, c_mixed, source),
                                      columns.flag_mixed, row, source);
    out.push_back(std::move(a));
  }
  return out;
}

double GoldMass::total() const {
  double sum = 0.0;
  for (double p : mass) sum += p;
  return sum;
}

std::vector<GoldMass> build_gold_mass(
    std::span<const HumanAnnotation> annotations) {
  std::map<std::string, std::vector<const HumanAnnotation*>> by_dialogue;
  for (const auto& a : annotations) by_dialogue[a.dialogue_id].push_back(&a);

  std::vector<GoldMass> out;
  out.reserve(by_dialogue.size());
  for (const auto& [id, group] : by_dialogue) {
    if (group.size() != 2) {
      throw ValidationError("dialogue " + id + " has " +
                            std::to_string(group.size()) +
                            " annotations, exactly 2 are required");
    }
    if (group[0]->annotator_id == group[1]->annotator_id) {
      throw ValidationError("dialogue " + id + " annotated twice by " +
                            group[0]->annotator_id);
    }
    GoldMass g;
    g.dialogue_id = id;
    for (TopicId t : all_topics()) {
      int votes = int(group[0]->topics.contains(t)) +
                  int(group[1]->topics.contains(t));
      g.mass[index_of(t)] = votes / 2.0;
    }
    out.push_back(std::move(g));
  }
  return out;
}

ChannelRegistry::ChannelRegistry(std::vector<ChannelMeta> channels)
    : channels_(std::move(channels)) {
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    auto [it, inserted] = index_.emplace(channels_[i].channel_id, i);
    if (!inserted) {
      throw ValidationError("duplicate channel_id '" + channels_[i].channel_id +
                            "'");
    }
  }
}

const ChannelMeta* ChannelRegistry::find(std::string_view channel_id) const {
  auto it = index_.find(channel_id);
  return it == index_.end() ? nullptr : &channels_[it->second];
}

ChannelRegistry load_channel_registry(std::string_view bytes,
                                      std::string_view source_view) {
  std::string source(source_view);
  json doc = ParseJson(bytes, source, 0);
  if (!doc.is_array()) throw ParseError(source, 0, "expected a JSON array");
  std::vector<ChannelMeta> channels;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& c = doc[i];
    std::string where = source + "[" + std::to_string(i) + "]";
    if (!c.is_object()) throw ParseError(where, 0, "expected an object");
    ChannelMeta meta;
    meta.channel_id = GetString(c, "channel_id", where, 0);
    meta.name = c.contains("name") ? GetString(c, "name", where, 0)
                                   : meta.channel_id;
    std::string medium = GetString(c, "medium", where, 0);
    if (medium == "tv") {
      meta.medium = Medium::kTv;
    } else if (medium == "radio") {
      meta.medium = Medium::kRadio;
    } else {
      throw ParseError(where, 0, "medium must be tv or radio");
    }
    std::string ownership = GetString(c, "ownership", where, 0);
    if (ownership == "public") {
      meta.ownership = Ownership::kPublic;
    } else if (ownership == "private") {
      meta.ownership = Ownership::kPrivate;
    } else {
      throw ParseError(where, 0, "ownership must be public or private");
    }
    if (auto it = c.find("news_cycle_24_7"); it != c.end()) {
      if (!it->is_boolean()) {
        throw ParseError(where, 0, "news_cycle_24_7 must be a boolean");
      }
      meta.news_cycle_24_7 = it->get<bool>();
    }
    channels.push_back(std::move(meta));
  }
  return ChannelRegistry(std::move(channels));
}

std::vector<LabelSet> read_label_sets(std::string_view bytes,
                                      const Taxonomy& taxonomy,
                                      std::string_view source) {
  std::vector<LabelSet> out;
  for_each_line(bytes, [&](std::string_view line, std::size_t line_no) {
    json obj = ParseJson(line, source, line_no);
    if (!obj.is_object()) {
      throw ParseError(std::string(source), line_no, "expected a JSON object");
    }
    LabelSet ls;
    ls.dialogue_id = GetString(obj, "dialogue_id", source, line_no);
    auto labels = obj.find("labels");
    if (labels == obj.end() || !labels->is_array()) {
      throw ParseError(std::string(source), line_no, "missing 'labels' array");
    }
    for (const auto& l : *labels) {
      if (!l.is_string()) {
        throw ParseError(std::string(source), line_no, "non-string label");
      }
      auto topic = taxonomy.lookup(l.get<std::string>());
      if (!topic) {
        throw ParseError(std::string(source), line_no,
                         "dialogue " + ls.dialogue_id + ": unknown label '" +
                             l.get<std::string>() + "'");
      }
      ls.topics.insert(*topic);
    }
    out.push_back(std::move(ls));
  });
  return out;
}

std::string write_label_sets(std::span<const LabelSet> labels) {
  std::string out;
  for (const LabelSet& ls : labels) {
    json obj = {{"dialogue_id", ls.dialogue_id}, {"labels", ls.topics.keys()}};
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace newsgauge
