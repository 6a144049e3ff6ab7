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

#include "newsgauge/assembler.h"

#include <cmath>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "newsgauge/error.h"
#include "newsgauge/io.h"
#include "newsgauge/parallel.h"

namespace newsgauge {
namespace {

using nlohmann::json;

void AppendText(std::string& text, std::string_view piece) {
  piece = trim(piece);
  if (piece.empty()) return;
  if (!text.empty()) text.push_back(' ');
  text.append(piece);
}

Dialogue OpenDialogue(const Utterance& u, std::size_t index) {
  Dialogue d;
  d.dialogue_id = u.program_id + ":" + std::to_string(index);
  d.program_id = u.program_id;
  d.channel_id = u.channel_id;
  d.start_s = u.start_s;
  d.end_s = u.end_s;
  return d;
}

void AddMember(Dialogue& d, const Utterance& u) {
  d.members.push_back(DialogueMember{u.utt_id, u.start_s, u.end_s});
  d.end_s = u.end_s;
  d.speech_duration_s += u.duration();
  AppendText(d.text, u.text);
}

}  // namespace

void AssemblyConfig::validate() const {
  if (!(max_gap_s > 0.0) || !std::isfinite(max_gap_s)) {
    throw ValidationError("max_gap_s must be strictly positive");
  }
  if (!(max_total_s > 0.0) || !std::isfinite(max_total_s)) {
    throw ValidationError("max_total_s must be strictly positive");
  }
}

std::vector<Dialogue> assemble_dialogues(std::span<const Utterance> utterances,
                                         const AssemblyConfig& cfg) {
  cfg.validate();
  std::vector<Dialogue> out;
  if (utterances.empty()) return out;

  const std::string& program = utterances.front().program_id;
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    const Utterance& u = utterances[i];
    if (u.program_id != program) {
      throw ValidationError("assemble_dialogues: utterance " + u.utt_id +
                            " belongs to program " + u.program_id +
                            ", expected " + program);
    }
    if (!(u.end_s > u.start_s)) {
      throw ValidationError("assemble_dialogues: utterance " + u.utt_id +
                            " has non-positive duration");
    }
    if (i > 0 && u.start_s < utterances[i - 1].end_s) {
      throw ValidationError("assemble_dialogues: utterance " + u.utt_id +
                            " is unsorted or overlaps " +
                            utterances[i - 1].utt_id);
    }
  }

  for (std::size_t i = 0; i < utterances.size(); ++i) {
    const Utterance& u = utterances[i];
    if (!out.empty()) {
      Dialogue& cur = out.back();
      double gap = u.start_s - cur.end_s;
      double total = cfg.duration_mode == DurationMode::kSpeechSum
                         ? cur.speech_duration_s + u.duration()
                         : u.end_s - cur.start_s;
      if (gap < cfg.max_gap_s && total < cfg.max_total_s) {
        AddMember(cur, u);
        continue;
      }
    }
    out.push_back(OpenDialogue(u, i));
    AddMember(out.back(), u);
  }
  return out;
}

std::vector<Dialogue> assemble_corpus(std::span<const Utterance> utterances,
                                      const AssemblyConfig& cfg,
                                      unsigned jobs) {
  cfg.validate();
  std::vector<std::span<const Utterance>> programs;
  std::set<std::string_view> seen;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= utterances.size(); ++i) {
    if (i == utterances.size() ||
        utterances[i].program_id != utterances[begin].program_id) {
      if (!seen.insert(utterances[begin].program_id).second) {
        throw ValidationError("assemble: utterances of program " +
                              utterances[begin].program_id +
                              " are not contiguous");
      }
      programs.push_back(utterances.subspan(begin, i - begin));
      begin = i;
    }
  }

  std::vector<std::vector<Dialogue>> per_program(programs.size());
  parallel_for(programs.size(), jobs, [&](std::size_t p) {
    per_program[p] = assemble_dialogues(programs[p], cfg);
  });

  std::vector<Dialogue> out;
  for (auto& group : per_program) {
    for (auto& d : group) out.push_back(std::move(d));
  }
  return out;
}

std::string dialogue_text(const Dialogue& dialogue,
                          std::span<const Utterance> utterances) {
  std::unordered_map<std::string_view, const Utterance*> by_id;
  by_id.reserve(utterances.size());
  for (const Utterance& u : utterances) by_id.emplace(u.utt_id, &u);

  std::string text;
  for (const DialogueMember& m : dialogue.members) {
    auto it = by_id.find(m.utt_id);
    if (it == by_id.end()) {
      throw ValidationError("dialogue " + dialogue.dialogue_id +
                            ": missing member utterance " + m.utt_id);
    }
    AppendText(text, it->second->text);
  }
  return text;
}

std::string write_dialogues_jsonl(std::span<const Dialogue> dialogues) {
  std::string out;
  for (const Dialogue& d : dialogues) {
    json members = json::array();
    for (const auto& m : d.members) {
      members.push_back(
          {{"utt_id", m.utt_id}, {"start_s", m.start_s}, {"end_s", m.end_s}});
    }
    json obj = {{"dialogue_id", d.dialogue_id},
                {"program_id", d.program_id},
                {"channel_id", d.channel_id},
                {"start_s", d.start_s},
                {"end_s", d.end_s},
                {"speech_duration_s", d.speech_duration_s},
                {"members", std::move(members)},
                {"text", d.text}};
    out += obj.dump(-1, ' ', false, json::error_handler_t::replace);
    out.push_back('\n');
  }
  return out;
}

std::vector<Dialogue> read_dialogues_jsonl(std::string_view bytes,
                                           std::string_view source_view) {
  std::string source(source_view);
  std::vector<Dialogue> out;
  for_each_line(bytes, [&](std::string_view line, std::size_t line_no) {
    json obj;
    try {
      obj = json::parse(line);
      Dialogue d;
      d.dialogue_id = obj.at("dialogue_id").get<std::string>();
      d.program_id = obj.at("program_id").get<std::string>();
      d.channel_id = obj.at("channel_id").get<std::string>();
      d.start_s = obj.at("start_s").get<double>();
      d.end_s = obj.at("end_s").get<double>();
      d.speech_duration_s = obj.at("speech_duration_s").get<double>();
      for (const auto& m : obj.at("members")) {
        d.members.push_back(DialogueMember{m.at("utt_id").get<std::string>(),
                                           m.at("start_s").get<double>(),
                                           m.at("end_s").get<double>()});
      }
      d.text = obj.at("text").get<std::string>();
      out.push_back(std::move(d));
    } catch (const json::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
  });
  return out;
}

}  // namespace newsgauge
