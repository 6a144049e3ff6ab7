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

#ifndef NEWSGAUGE_CORPUS_MODEL_H_
#define NEWSGAUGE_CORPUS_MODEL_H_

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace newsgauge {

inline constexpr std::size_t kNumTopics = 18;

// The 18 news topics, in canonical (report) order.
enum class TopicId : std::uint8_t {
  kReligionBelief,
  kScienceTechnology,
  kEducation,
  kDisasterAccident,
  kLabour,
  kWeather,
  kHealth,
  kOther,
  kEnvironmentalIssue,
  kSport,
  kLifestyleLeisure,
  kSocialIssue,
  kEconomyBusinessFinance,
  kCommercial,
  kArtsCultureEntertainment,
  kCrimeLawJustice,
  kPolitics,
  kUnrestConflictsWar,
};

constexpr std::size_t index_of(TopicId t) { return static_cast<std::size_t>(t); }
constexpr TopicId topic_at(std::size_t i) { return static_cast<TopicId>(i); }

// Stable machine key, e.g. "unrest_conflicts_war".
std::string_view topic_key(TopicId t);
// Exact match on the machine key only. See canonical_topic() for free text.
std::optional<TopicId> topic_from_key(std::string_view key);

const std::array<TopicId, kNumTopics>& all_topics();

// A set of topics. Iteration and to_vector() follow canonical order.
class TopicSet {
 public:
  TopicSet() = default;
  TopicSet(std::initializer_list<TopicId> topics) {
    for (TopicId t : topics) insert(t);
  }

  void insert(TopicId t) { bits_.set(index_of(t)); }
  void erase(TopicId t) { bits_.reset(index_of(t)); }
  bool contains(TopicId t) const { return bits_.test(index_of(t)); }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }

  std::vector<TopicId> to_vector() const;
  std::vector<std::string> keys() const;

  friend bool operator==(const TopicSet&, const TopicSet&) = default;

 private:
  std::bitset<kNumTopics> bits_;
};

struct Topic {
  TopicId id;
  std::string display_name;
  std::string description;
  std::vector<std::string> aliases;
};

// Lowercase, strip accents (NFKD then drop combining marks), trim, and
// collapse internal whitespace runs to one ASCII space.
std::string normalize_label(std::string_view raw);

// Topic list plus a normalized alias index. Immutable once built.
class Taxonomy {
 public:
  // Parses the taxonomy JSON document (array of {id, display_name,
  // description, aliases}). Throws ValidationError on duplicate or unknown
  // ids, missing topics, or aliases that collide across topics.
  static Taxonomy FromJson(std::string_view json);

  // The taxonomy shipped in data/taxonomy.json.
  static const Taxonomy& Builtin();

  // Topics in canonical order.
  const std::vector<Topic>& topics() const { return topics_; }
  const Topic& topic(TopicId t) const { return topics_[index_of(t)]; }

  // Resolves an id, display name, or alias after normalization. Returns
  // nullopt (Unknown) rather than guessing.
  std::optional<TopicId> lookup(std::string_view raw) const;

  // SHA-256 (hex) of the canonical keys joined by '\n'. Shared with model
  // servers so a mismatched label space is detected before scoring.
  std::string fingerprint() const;

 private:
  Taxonomy() = default;

  std::vector<Topic> topics_;
  std::unordered_map<std::string, TopicId> alias_index_;
};

inline std::optional<TopicId> canonical_topic(std::string_view raw,
                                              const Taxonomy& taxonomy) {
  return taxonomy.lookup(raw);
}

enum class Medium { kTv, kRadio };
enum class Ownership { kPublic, kPrivate };

std::string_view to_string(Medium m);
std::string_view to_string(Ownership o);

struct ChannelMeta {
  std::string channel_id;
  std::string name;
  Medium medium = Medium::kTv;
  Ownership ownership = Ownership::kPrivate;
  bool news_cycle_24_7 = false;
};

struct Utterance {
  std::string utt_id;
  std::string channel_id;
  std::string program_id;
  double start_s = 0.0;
  double end_s = 0.0;
  std::string text;

  double duration() const { return end_s - start_s; }
  friend bool operator==(const Utterance&, const Utterance&) = default;
};

struct DialogueMember {
  std::string utt_id;
  double start_s = 0.0;
  double end_s = 0.0;

  friend bool operator==(const DialogueMember&,
                         const DialogueMember&) = default;
};

// A run of consecutive utterances of one program. Members keep their own
// timings so gendered speech can be measured without the utterance file.
struct Dialogue {
  std::string dialogue_id;
  std::string program_id;
  std::string channel_id;
  std::vector<DialogueMember> members;
  double start_s = 0.0;
  double end_s = 0.0;
  double speech_duration_s = 0.0;
  std::string text;

  std::vector<std::string> member_utt_ids() const;
  friend bool operator==(const Dialogue&, const Dialogue&) = default;
};

struct LabelSet {
  std::string dialogue_id;
  TopicSet topics;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;
};

}  // namespace newsgauge

#endif  // NEWSGAUGE_CORPUS_MODEL_H_
