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

#include "newsgauge/corpus_model.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>

#include "json.hpp"
#include "newsgauge/defaults.h"
#include "newsgauge/error.h"
#include "newsgauge/io.h"

namespace newsgauge {
namespace {

constexpr std::array<std::string_view, kNumTopics> kTopicKeys = {
    "religion_belief",
    "science_technology",
    "education",
    "disaster_accident",
    "labour",
    "weather",
    "health",
    "other",
    "environmental_issue",
    "sport",
    "lifestyle_leisure",
    "social_issue",
    "economy_business_finance",
    "commercial",
    "arts_culture_entertainment",
    "crime_law_justice",
    "politics",
    "unrest_conflicts_war",
};

constexpr std::array<TopicId, kNumTopics> MakeAllTopics() {
  std::array<TopicId, kNumTopics> out{};
  for (std::size_t i = 0; i < kNumTopics; ++i) out[i] = topic_at(i);
  return out;
}

constexpr std::array<TopicId, kNumTopics> kAllTopics = MakeAllTopics();

std::string RequireString(const nlohmann::json& obj, const char* key,
                          std::size_t entry) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw ValidationError("taxonomy entry " + std::to_string(entry) +
                          ": missing string field '" + key + "'");
  }
  return it->get<std::string>();
}

}  // namespace

std::string_view topic_key(TopicId t) { return kTopicKeys[index_of(t)]; }

std::optional<TopicId> topic_from_key(std::string_view key) {
  auto it = std::find(kTopicKeys.begin(), kTopicKeys.end(), key);
  if (it == kTopicKeys.end()) return std::nullopt;
  return topic_at(static_cast<std::size_t>(it - kTopicKeys.begin()));
}

const std::array<TopicId, kNumTopics>& all_topics() { return kAllTopics; }

std::vector<TopicId> TopicSet::to_vector() const {
  std::vector<TopicId> out;
  out.reserve(size());
  for (TopicId t : kAllTopics) {
    if (contains(t)) out.push_back(t);
  }
  return out;
}

std::vector<std::string> TopicSet::keys() const {
  std::vector<std::string> out;
  for (TopicId t : to_vector()) out.emplace_back(topic_key(t));
  return out;
}

std::string normalize_label(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfkd = icu::Normalizer2::getNFKDInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFKD normalizer unavailable");

  icu::UnicodeString input = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  icu::UnicodeString decomposed = nfkd->normalize(input, status);
  if (U_FAILURE(status)) throw Error("ICU normalization failed");

  icu::UnicodeString folded;
  for (int32_t i = 0; i < decomposed.length();) {
    UChar32 c = decomposed.char32At(i);
    i += U16_LENGTH(c);
    if (u_charType(c) == U_NON_SPACING_MARK) continue;
    folded.append(c);
  }
  folded.toLower(icu::Locale::getRoot());

  // Trim and collapse whitespace.
  icu::UnicodeString collapsed;
  bool pending_space = false;
  for (int32_t i = 0; i < folded.length();) {
    UChar32 c = folded.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      pending_space = !collapsed.isEmpty();
      continue;
    }
    if (pending_space) collapsed.append(static_cast<UChar>(' '));
    pending_space = false;
    collapsed.append(c);
  }
  std::string out;
  collapsed.toUTF8String(out);
  return out;
}

Taxonomy Taxonomy::FromJson(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError::AtOffset("taxonomy", e.byte, e.what());
  }
  if (!doc.is_array()) throw ValidationError("taxonomy: expected a JSON array");

  std::array<std::optional<Topic>, kNumTopics> slots;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& entry = doc[i];
    if (!entry.is_object()) {
      throw ValidationError("taxonomy entry " + std::to_string(i) +
                            ": expected an object");
    }
    std::string key = RequireString(entry, "id", i);
    auto id = topic_from_key(key);
    if (!id) throw ValidationError("taxonomy: unknown topic id '" + key + "'");
    if (slots[index_of(*id)]) {
      throw ValidationError("taxonomy: duplicate topic id '" + key + "'");
    }
    Topic topic{*id, RequireString(entry, "display_name", i),
                RequireString(entry, "description", i),
                {}};
    if (auto it = entry.find("aliases"); it != entry.end()) {
      if (!it->is_array()) {
        throw ValidationError("taxonomy: aliases of '" + key +
                              "' must be an array");
      }
      for (const auto& alias : *it) {
        if (!alias.is_string()) {
          throw ValidationError("taxonomy: non-string alias in '" + key + "'");
        }
        topic.aliases.push_back(alias.get<std::string>());
      }
    }
    slots[index_of(*id)] = std::move(topic);
  }

  Taxonomy taxonomy;
  for (std::size_t i = 0; i < kNumTopics; ++i) {
    if (!slots[i]) {
      throw ValidationError("taxonomy: missing topic '" +
                            std::string(kTopicKeys[i]) + "'");
    }
    taxonomy.topics_.push_back(std::move(*slots[i]));
  }

  for (const Topic& topic : taxonomy.topics_) {
    std::vector<std::string> forms = {std::string(topic_key(topic.id)),
                                      topic.display_name};
    forms.insert(forms.end(), topic.aliases.begin(), topic.aliases.end());
    for (const std::string& form : forms) {
      std::string norm = normalize_label(form);
      if (norm.empty()) {
        throw ValidationError("taxonomy: empty alias in '" +
                              std::string(topic_key(topic.id)) + "'");
      }
      auto [it, inserted] = taxonomy.alias_index_.emplace(norm, topic.id);
      if (!inserted && it->second != topic.id) {
        throw ValidationError("taxonomy: alias '" + form + "' of '" +
                              std::string(topic_key(topic.id)) +
                              "' collides with '" +
                              std::string(topic_key(it->second)) + "'");
      }
    }
  }
  return taxonomy;
}

const Taxonomy& Taxonomy::Builtin() {
  static const Taxonomy kBuiltin = FromJson(default_taxonomy_json());
  return kBuiltin;
}

std::optional<TopicId> Taxonomy::lookup(std::string_view raw) const {
  auto it = alias_index_.find(normalize_label(raw));
  if (it == alias_index_.end()) return std::nullopt;
  return it->second;
}

std::string Taxonomy::fingerprint() const {
  std::string joined;
  for (std::size_t i = 0; i < kNumTopics; ++i) {
    if (i) joined.push_back('\n');
    joined.append(kTopicKeys[i]);
  }
  return sha256_hex(joined);
}

std::string_view to_string(Medium m) {
  return m == Medium::kTv ? "tv" : "radio";
}

std::string_view to_string(Ownership o) {
  return o == Ownership::kPublic ? "public" : "private";
}

std::vector<std::string> Dialogue::member_utt_ids() const {
  std::vector<std::string> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.utt_id);
  return out;
}

}  // namespace newsgauge
