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

#ifndef NEWSGAUGE_ANALYTICS_H_
#define NEWSGAUGE_ANALYTICS_H_

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "newsgauge/corpus_model.h"
#include "newsgauge/ingest.h"

namespace newsgauge {

struct TimeByGender {
  double female_s = 0.0;
  double male_s = 0.0;

  double total() const { return female_s + male_s; }
  TimeByGender& operator+=(const TimeByGender& o) {
    female_s += o.female_s;
    male_s += o.male_s;
    return *this;
  }
  friend TimeByGender operator+(TimeByGender a, const TimeByGender& b) {
    return a += b;
  }
  friend bool operator==(const TimeByGender&, const TimeByGender&) = default;
};

enum class Gender { kFemale, kMale };

// Gendered seconds of [start_s, end_s): overlap with female and male spans.
// `spans` must be sorted and non-overlapping (parse_gender_spans output);
// non-gender labels are ignored.
TimeByGender gender_durations(double start_s, double end_s,
                              std::span<const GenderSpan> spans);
inline TimeByGender gender_durations(const Utterance& u,
                                     std::span<const GenderSpan> spans) {
  return gender_durations(u.start_s, u.end_s, spans);
}

// Gender spans keyed by media id (= program id of the utterances).
using GenderSpanIndex = std::map<std::string, std::vector<GenderSpan>, std::less<>>;

enum class GroupBy { kNone, kOwnership, kMedium, kChannel };

GroupBy parse_group_by(std::string_view name);
std::string_view to_string(GroupBy group_by);

struct TopicGenderAggregate {
  std::string group;  // "all" when ungrouped
  std::array<TimeByGender, kNumTopics> per_topic{};
  TimeByGender global_unique;
  std::size_t n_dialogues = 0;
};

struct AggregateOptions {
  GroupBy group_by = GroupBy::kNone;
  // Called once per channel missing from the registry; such channels are
  // grouped under "unknown".
  std::function<void(std::string_view channel_id)> on_unknown_channel;
};

// Each dialogue's gendered time is computed once from its members, added to
// every topic of its label set and once to global_unique. Rows are sorted by
// group key. Throws ValidationError if a dialogue has no label set.
std::vector<TopicGenderAggregate> topic_gender_aggregate(
    std::span<const Dialogue> dialogues, std::span<const LabelSet> labels,
    const GenderSpanIndex& spans, const ChannelRegistry& registry,
    const AggregateOptions& options = {});

// female / (female + male); nullopt with no gendered speech.
std::optional<double> parity(const TimeByGender& t);

// Share of one gender's topic time per topic. Throws ValidationError when
// that gender has no time at all.
std::array<double, kNumTopics> gender_topic_distribution(
    const TopicGenderAggregate& agg, Gender gender);

enum class DisparityMode {
  // global parity - topic parity; > 0 means more male-leaning than average.
  kParityDifference,
  // male distribution share - female distribution share.
  kDistributionDifference,
};

DisparityMode parse_disparity_mode(std::string_view name);
std::string_view to_string(DisparityMode mode);

// Fractions (0.154 = 15.4 points). Missing parity propagates as nullopt.
std::array<std::optional<double>, kNumTopics> disparity(
    const TopicGenderAggregate& agg, std::optional<double> global_parity,
    DisparityMode mode = DisparityMode::kParityDifference);

}  // namespace newsgauge

#endif  // NEWSGAUGE_ANALYTICS_H_
