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

#include "newsgauge/analytics.h"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "newsgauge/error.h"

namespace newsgauge {

TimeByGender gender_durations(double start_s, double end_s,
                              std::span<const GenderSpan> spans) {
  TimeByGender out;
  // First span that ends after the interval starts.
  auto it = std::partition_point(
      spans.begin(), spans.end(),
      [&](const GenderSpan& s) { return s.end_s <= start_s; });
  for (; it != spans.end() && it->start_s < end_s; ++it) {
    double overlap = std::min(end_s, it->end_s) - std::max(start_s, it->start_s);
    if (overlap <= 0.0) continue;
    if (it->label == SpanLabel::kFemale) out.female_s += overlap;
    if (it->label == SpanLabel::kMale) out.male_s += overlap;
  }
  return out;
}

GroupBy parse_group_by(std::string_view name) {
  if (name == "none") return GroupBy::kNone;
  if (name == "ownership") return GroupBy::kOwnership;
  if (name == "medium") return GroupBy::kMedium;
  if (name == "channel") return GroupBy::kChannel;
  throw ValidationError("unknown group-by '" + std::string(name) +
                        "' (expected none, ownership, medium or channel)");
}

std::string_view to_string(GroupBy group_by) {
  switch (group_by) {
    case GroupBy::kNone: return "none";
    case GroupBy::kOwnership: return "ownership";
    case GroupBy::kMedium: return "medium";
    case GroupBy::kChannel: return "channel";
  }
  return "none";
}

std::vector<TopicGenderAggregate> topic_gender_aggregate(
    std::span<const Dialogue> dialogues, std::span<const LabelSet> labels,
    const GenderSpanIndex& spans, const ChannelRegistry& registry,
    const AggregateOptions& options) {
  std::unordered_map<std::string_view, const TopicSet*> label_index;
  for (const LabelSet& ls : labels) {
    if (!label_index.emplace(ls.dialogue_id, &ls.topics).second) {
      throw ValidationError("duplicate label set for dialogue " +
                            ls.dialogue_id);
    }
  }

  std::set<std::string> warned;
  auto group_of = [&](const Dialogue& d) -> std::string {
    if (options.group_by == GroupBy::kNone) return "all";
    const ChannelMeta* meta = registry.find(d.channel_id);
    if (options.group_by == GroupBy::kChannel) {
      if (!meta && warned.insert(d.channel_id).second &&
          options.on_unknown_channel) {
        options.on_unknown_channel(d.channel_id);
      }
      return d.channel_id;
    }
    if (!meta) {
      if (warned.insert(d.channel_id).second && options.on_unknown_channel) {
        options.on_unknown_channel(d.channel_id);
      }
      return "unknown";
    }
    return std::string(options.group_by == GroupBy::kOwnership
                           ? to_string(meta->ownership)
                           : to_string(meta->medium));
  };

  std::map<std::string, TopicGenderAggregate> groups;
  for (const Dialogue& d : dialogues) {
    auto lit = label_index.find(d.dialogue_id);
    if (lit == label_index.end()) {
      throw ValidationError("dialogue " + d.dialogue_id + " has no labels");
    }

    TimeByGender time;
    auto sit = spans.find(d.program_id);
    if (sit != spans.end()) {
      for (const DialogueMember& m : d.members) {
        time += gender_durations(m.start_s, m.end_s, sit->second);
      }
    }

    std::string key = group_of(d);
    TopicGenderAggregate& agg = groups[key];
    agg.group = key;
    ++agg.n_dialogues;
    agg.global_unique += time;
    for (TopicId t : lit->second->to_vector()) agg.per_topic[index_of(t)] += time;
  }

  std::vector<TopicGenderAggregate> out;
  out.reserve(groups.size());
  for (auto& [key, agg] : groups) out.push_back(std::move(agg));
  return out;
}

std::optional<double> parity(const TimeByGender& t) {
  double total = t.total();
  if (!(total > 0.0)) return std::nullopt;
  return t.female_s / total;
}

std::array<double, kNumTopics> gender_topic_distribution(
    const TopicGenderAggregate& agg, Gender gender) {
  auto pick = [gender](const TimeByGender& t) {
    return gender == Gender::kFemale ? t.female_s : t.male_s;
  };
  double total = 0.0;
  for (const auto& t : agg.per_topic) total += pick(t);
  if (!(total > 0.0)) {
    throw ValidationError(std::string("no ") +
                          (gender == Gender::kFemale ? "female" : "male") +
                          " speaking time in group " + agg.group);
  }
  std::array<double, kNumTopics> out{};
  for (std::size_t i = 0; i < kNumTopics; ++i) {
    out[i] = pick(agg.per_topic[i]) / total;
  }
  return out;
}

DisparityMode parse_disparity_mode(std::string_view name) {
  if (name == "parity") return DisparityMode::kParityDifference;
  if (name == "distribution") return DisparityMode::kDistributionDifference;
  throw ValidationError("unknown disparity mode '" + std::string(name) +
                        "' (expected parity or distribution)");
}

std::string_view to_string(DisparityMode mode) {
  return mode == DisparityMode::kParityDifference ? "parity" : "distribution";
}

std::array<std::optional<double>, kNumTopics> disparity(
    const TopicGenderAggregate& agg, std::optional<double> global_parity,
    DisparityMode mode) {
  std::array<std::optional<double>, kNumTopics> out{};
  if (mode == DisparityMode::kParityDifference) {
    if (!global_parity) return out;
    for (std::size_t i = 0; i < kNumTopics; ++i) {
      if (auto p = parity(agg.per_topic[i])) out[i] = *global_parity - *p;
    }
    return out;
  }

  double female_total = 0.0, male_total = 0.0;
  for (const auto& t : agg.per_topic) {
    female_total += t.female_s;
    male_total += t.male_s;
  }
  if (!(female_total > 0.0) || !(male_total > 0.0)) return out;
  auto female = gender_topic_distribution(agg, Gender::kFemale);
  auto male = gender_topic_distribution(agg, Gender::kMale);
  for (std::size_t i = 0; i < kNumTopics; ++i) out[i] = male[i] - female[i];
  return out;
}

}  // namespace newsgauge
