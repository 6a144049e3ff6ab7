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

#include <cctype>
#include <optional>
#include <set>

#include "json.hpp"
#include "newsgauge/annotator.h"
#include "newsgauge/defaults.h"
#include "newsgauge/error.h"
#include "newsgauge/io.h"

namespace newsgauge {
namespace {

using nlohmann::json;

constexpr std::string_view kTaskStatement =
    "Tu es un assistant qui annote des extraits de journaux télévisés et "
    "radiophoniques français. Chaque extrait est une transcription "
    "automatique de quelques phrases consécutives. Indique toutes les "
    "catégories thématiques qui s'appliquent à l'extrait : un extrait peut "
    "relever de plusieurs catégories, et l'ordre n'a pas d'importance.";

constexpr std::string_view kOutputContract =
    "Réponds uniquement par une liste JSON contenant les noms exacts des "
    "catégories retenues, par exemple [\"sport\", \"santé\"]. N'ajoute "
    "aucune explication, aucun commentaire et aucune catégorie absente de la "
    "liste.";

// Index one past the bracket closing the array opened at `open`, or npos.
std::size_t MatchArray(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '[') {
      ++depth;
    } else if (c == ']') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

// True if `s` holds anything besides whitespace and code-fence markers
// (``` optionally followed by a language tag).
bool HasProse(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    if (s.substr(i, 3) == "```") {
      i += 3;
      while (i < s.size() && std::isalnum(static_cast<unsigned char>(s[i]))) {
        ++i;
      }
      continue;
    }
    return true;
  }
  return false;
}

}  // namespace

std::vector<FewShotExample> load_fewshot(std::string_view text,
                                         const Taxonomy& taxonomy) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError::AtOffset("fewshot", e.byte, e.what());
  }
  if (!doc.is_array()) throw ValidationError("fewshot: expected a JSON array");
  if (doc.size() != 3) {
    throw ValidationError("fewshot: expected exactly 3 examples, got " +
                          std::to_string(doc.size()));
  }
  std::vector<FewShotExample> out;
  TopicSet covered;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& e = doc[i];
    std::string where = "fewshot example " + std::to_string(i);
    if (!e.is_object() || !e.contains("text") || !e["text"].is_string() ||
        !e.contains("labels") || !e["labels"].is_array()) {
      throw ValidationError(where + ": expected {text, labels}");
    }
    FewShotExample ex;
    ex.text = e["text"].get<std::string>();
    if (trim(ex.text).empty()) throw ValidationError(where + ": empty text");
    for (const auto& l : e["labels"]) {
      if (!l.is_string()) throw ValidationError(where + ": non-string label");
      auto topic = taxonomy.lookup(l.get<std::string>());
      if (!topic) {
        throw ValidationError(where + ": unknown label '" +
                              l.get<std::string>() + "'");
      }
      ex.topics.insert(*topic);
      covered.insert(*topic);
    }
    if (ex.topics.empty()) throw ValidationError(where + ": no labels");
    out.push_back(std::move(ex));
  }
  if (covered.size() != 3) {
    throw ValidationError("fewshot: examples must cover exactly 3 distinct "
                          "topics, got " +
                          std::to_string(covered.size()));
  }
  return out;
}

std::vector<FewShotExample> builtin_fewshot(const Taxonomy& taxonomy) {
  return load_fewshot(default_fewshot_json(), taxonomy);
}

std::string ChatRequest::to_json() const {
  json msgs = json::array();
  for (const auto& m : messages) {
    msgs.push_back({{"role", m.role}, {"content", m.content}});
  }
  json body = {{"model", model},
               {"messages", std::move(msgs)},
               {"temperature", temperature},
               {"max_tokens", max_tokens}};
  return body.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string format_label_answer(const TopicSet& topics,
                                const Taxonomy& taxonomy) {
  json names = json::array();
  for (TopicId t : topics.to_vector()) {
    names.push_back(taxonomy.topic(t).display_name);
  }
  return names.dump(-1, ' ', false, json::error_handler_t::replace);
}

ChatRequest build_prompt(std::string_view dialogue_text,
                         const Taxonomy& taxonomy,
                         std::span<const FewShotExample> fewshot,
                         const PromptOptions& options) {
  if (fewshot.size() != 3) {
    throw ValidationError("build_prompt: expected 3 few-shot examples, got " +
                          std::to_string(fewshot.size()));
  }
  if (trim(dialogue_text).empty()) {
    throw ValidationError("build_prompt: empty dialogue text");
  }

  std::string system(kTaskStatement);
  system += "\n\nCatégories disponibles :\n";
  for (const Topic& topic : taxonomy.topics()) {
    system += "- ";
    system += topic.display_name;
    system += " : ";
    system += topic.description;
    system += '\n';
  }
  system += '\n';
  system += kOutputContract;

  ChatRequest req;
  req.model = options.model;
  req.temperature = options.temperature;
  req.max_tokens = options.max_tokens;
  req.messages.push_back({"system", std::move(system)});
  for (const FewShotExample& ex : fewshot) {
    req.messages.push_back({"user", ex.text});
    req.messages.push_back({"assistant", format_label_answer(ex.topics, taxonomy)});
  }
  req.messages.push_back({"user", std::string(dialogue_text)});
  return req;
}

ParsedLabels parse_llm_output(std::string_view raw, const Taxonomy& taxonomy) {
  ParsedLabels out;
  std::optional<json> array;
  std::size_t begin = 0, end = 0;
  for (std::size_t pos = raw.find('['); pos != std::string_view::npos;
       pos = raw.find('[', pos + 1)) {
    std::size_t close = MatchArray(raw, pos);
    if (close == std::string_view::npos) continue;
    json candidate = json::parse(raw.substr(pos, close - pos), nullptr,
                                 /*allow_exceptions=*/false);
    if (candidate.is_discarded() || !candidate.is_array()) continue;
    bool all_strings = true;
    for (const auto& e : candidate) all_strings = all_strings && e.is_string();
    if (!all_strings) continue;
    array = std::move(candidate);
    begin = pos;
    end = close;
    break;
  }

  if (array) {
    out.stats.parsed_ok = true;
    out.stats.stripped_prose =
        HasProse(raw.substr(0, begin)) || HasProse(raw.substr(end));
    for (const auto& e : *array) {
      auto topic = taxonomy.lookup(e.get<std::string>());
      if (topic) {
        out.topics.insert(*topic);
      } else {
        ++out.stats.dropped_unknown;
      }
    }
  }
  if (out.topics.empty()) {
    out.topics.insert(TopicId::kOther);
    out.stats.used_fallback = true;
  }
  return out;
}

}  // namespace newsgauge
