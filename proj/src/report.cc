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

#include "newsgauge/report.h"

#include <fmt/format.h>

#include <chrono>
#include <ctime>

#include "newsgauge/csv.h"
#include "newsgauge/error.h"
#include "newsgauge/io.h"

namespace newsgauge {
namespace {

using nlohmann::json;

json OptionalNumber(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> NumberOrNull(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json ScoresJson(const Scores& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

Scores ScoresFrom(const json& j) {
  return {j.at("precision").get<double>(), j.at("recall").get<double>(),
          j.at("f1").get<double>()};
}

TopicId TopicFrom(const json& j) {
  auto t = topic_from_key(j.at("topic").get<std::string>());
  if (!t) {
    throw ValidationError("unknown topic '" + j.at("topic").get<std::string>() +
                          "'");
  }
  return *t;
}

bool HasTime(const TimeByGender& t) { return t.total() > 0.0; }

}  // namespace

std::string format_fixed4(double value) { return fmt::format("{:.4f}", value); }

std::string format_fixed4(const std::optional<double>& value) {
  return value ? format_fixed4(*value) : std::string();
}

std::string parity_csv(const std::vector<TopicGenderAggregate>& aggregates) {
  CsvWriter w({"group", "topic", "female_s", "male_s", "parity"});
  for (const auto& agg : aggregates) {
    for (std::size_t i = 0; i < kNumTopics; ++i) {
      const TimeByGender& t = agg.per_topic[i];
      if (!HasTime(t)) continue;
      w.add_row({agg.group, std::string(topic_key(topic_at(i))),
                 format_fixed4(t.female_s), format_fixed4(t.male_s),
                 format_fixed4(parity(t))});
    }
  }
  return w.str();
}

std::string distribution_csv(const std::vector<TopicGenderAggregate>& aggregates) {
  CsvWriter w({"group", "topic", "female", "male"});
  for (const auto& agg : aggregates) {
    double female_total = 0.0, male_total = 0.0;
    for (const auto& t : agg.per_topic) {
      female_total += t.female_s;
      male_total += t.male_s;
    }
    for (std::size_t i = 0; i < kNumTopics; ++i) {
      const TimeByGender& t = agg.per_topic[i];
      if (!HasTime(t)) continue;
      std::optional<double> female, male;
      if (female_total > 0.0) female = t.female_s / female_total;
      if (male_total > 0.0) male = t.male_s / male_total;
      w.add_row({agg.group, std::string(topic_key(topic_at(i))),
                 format_fixed4(female), format_fixed4(male)});
    }
  }
  return w.str();
}

std::string disparity_csv(const std::vector<TopicGenderAggregate>& aggregates,
                          DisparityMode mode) {
  CsvWriter w({"group", "topic", "global_parity", "topic_parity", "disparity"});
  for (const auto& agg : aggregates) {
    std::optional<double> global = parity(agg.global_unique);
    auto d = disparity(agg, global, mode);
    for (std::size_t i = 0; i < kNumTopics; ++i) {
      const TimeByGender& t = agg.per_topic[i];
      if (!HasTime(t)) continue;
      w.add_row({agg.group, std::string(topic_key(topic_at(i))),
                 format_fixed4(global), format_fixed4(parity(t)),
                 format_fixed4(d[i])});
    }
  }
  return w.str();
}

std::string agreement_csv(const std::optional<AgreementResult>& agreement) {
  CsvWriter w({"topic", "alpha", "mass", "mass_share", "dialogue_share",
               "duration_s"});
  if (!agreement) return w.str();
  double total_mass = 0.0;
  for (std::size_t i = 0; i < kNumTopics; ++i) {
    const TopicAgreement& t = agreement->topics[i];
    total_mass += t.mass;
    w.add_row({std::string(topic_key(topic_at(i))), format_fixed4(t.alpha),
               format_fixed4(t.mass), format_fixed4(t.mass_share),
               format_fixed4(t.dialogue_share), format_fixed4(t.duration_s)});
  }
  w.add_row({"total", format_fixed4(agreement->global_alpha),
             format_fixed4(total_mass),
             format_fixed4(total_mass > 0.0 ? std::optional<double>(1.0)
                                            : std::nullopt),
             format_fixed4(agreement->mean_topics_per_dialogue),
             format_fixed4(agreement->total_duration_s)});
  return w.str();
}

std::string scores_by_topic_csv(const EvaluationResult& evaluation) {
  CsvWriter w({"topic", "tp", "fp", "fn", "tn", "precision", "recall", "f1"});
  const SoftCounts& c = evaluation.counts;
  for (std::size_t i = 0; i < kNumTopics; ++i) {
    const Scores& s = evaluation.per_topic[i];
    w.add_row({std::string(topic_key(topic_at(i))), format_fixed4(c.tp(i)),
               format_fixed4(c.fp(i)), format_fixed4(c.fn(i)),
               format_fixed4(c.tn(i)), format_fixed4(s.precision),
               format_fixed4(s.recall), format_fixed4(s.f1)});
  }
  return w.str();
}

json to_json(const EvaluationResult& evaluation) {
  json per_topic = json::array();
  const SoftCounts& c = evaluation.counts;
  for (std::size_t i = 0; i < kNumTopics; ++i) {
    json row = ScoresJson(evaluation.per_topic[i]);
    row["topic"] = topic_key(topic_at(i));
    row["tp"] = c.tp(i);
    row["fp"] = c.fp(i);
    row["fn"] = c.fn(i);
    row["tn"] = c.tn(i);
    per_topic.push_back(std::move(row));
  }
  json intervals = json::object();
  for (const auto& mi : evaluation.intervals) {
    intervals[std::string(to_string(mi.metric))] = {
        {"point", mi.interval.point},
        {"lo", mi.interval.lo},
        {"hi", mi.interval.hi},
        {"half_width", (mi.interval.hi - mi.interval.lo) / 2.0}};
  }
  return {{"n_dialogues", evaluation.n_dialogues},
          {"micro", ScoresJson(evaluation.micro)},
          {"macro", ScoresJson(evaluation.macro)},
          {"per_topic", std::move(per_topic)},
          {"bootstrap",
           {{"n_resamples", evaluation.options.bootstrap},
            {"confidence", evaluation.options.confidence},
            {"seed", evaluation.options.seed}}},
          {"intervals", std::move(intervals)}};
}

EvaluationResult evaluation_from_json(const json& doc) {
  try {
    EvaluationResult r;
    r.n_dialogues = doc.at("n_dialogues").get<std::size_t>();
    r.counts.n_dialogues = r.n_dialogues;
    r.micro = ScoresFrom(doc.at("micro"));
    r.macro = ScoresFrom(doc.at("macro"));
    for (const auto& row : doc.at("per_topic")) {
      std::size_t i = index_of(TopicFrom(row));
      r.per_topic[i] = ScoresFrom(row);
      r.counts.tp(i) = row.at("tp").get<double>();
      r.counts.fp(i) = row.at("fp").get<double>();
      r.counts.fn(i) = row.at("fn").get<double>();
      r.counts.tn(i) = row.at("tn").get<double>();
    }
    const json& b = doc.at("bootstrap");
    r.options.bootstrap = b.at("n_resamples").get<int>();
    r.options.confidence = b.at("confidence").get<double>();
    r.options.seed = b.at("seed").get<std::uint64_t>();
    // Interval order follows the Metric enum, not the (sorted) JSON keys.
    for (Metric m : {Metric::kMicroF1, Metric::kMicroPrecision,
                     Metric::kMicroRecall, Metric::kMacroF1,
                     Metric::kMacroPrecision, Metric::kMacroRecall}) {
      const json& all = doc.at("intervals");
      auto it = all.find(std::string(to_string(m)));
      if (it == all.end()) continue;
      Interval iv;
      iv.point = it->at("point").get<double>();
      iv.lo = it->at("lo").get<double>();
      iv.hi = it->at("hi").get<double>();
      iv.n_resamples = r.options.bootstrap;
      iv.confidence = r.options.confidence;
      r.intervals.push_back({m, iv});
    }
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scores document: ") + e.what());
  }
}

json to_json(const AgreementResult& agreement) {
  json topics = json::array();
  for (std::size_t i = 0; i < kNumTopics; ++i) {
    const TopicAgreement& t = agreement.topics[i];
    topics.push_back({{"topic", topic_key(topic_at(i))},
                      {"alpha", OptionalNumber(t.alpha)},
                      {"mass", t.mass},
                      {"mass_share", t.mass_share},
                      {"dialogue_share", t.dialogue_share},
                      {"duration_s", OptionalNumber(t.duration_s)}});
  }
  return {{"n_dialogues", agreement.n_dialogues},
          {"global_alpha", OptionalNumber(agreement.global_alpha)},
          {"mean_topics_per_dialogue", agreement.mean_topics_per_dialogue},
          {"total_duration_s", OptionalNumber(agreement.total_duration_s)},
          {"topics", std::move(topics)}};
}

AgreementResult agreement_from_json(const json& doc) {
  try {
    AgreementResult r;
    r.n_dialogues = doc.at("n_dialogues").get<std::size_t>();
    r.global_alpha = NumberOrNull(doc, "global_alpha");
    r.mean_topics_per_dialogue = doc.at("mean_topics_per_dialogue").get<double>();
    r.total_duration_s = NumberOrNull(doc, "total_duration_s");
    for (const auto& row : doc.at("topics")) {
      TopicAgreement& t = r.topics[index_of(TopicFrom(row))];
      t.alpha = NumberOrNull(row, "alpha");
      t.mass = row.at("mass").get<double>();
      t.mass_share = row.at("mass_share").get<double>();
      t.dialogue_share = row.at("dialogue_share").get<double>();
      t.duration_s = NumberOrNull(row, "duration_s");
    }
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("agreement document: ") + e.what());
  }
}

json to_json(const std::vector<TopicGenderAggregate>& aggregates) {
  json groups = json::array();
  for (const auto& agg : aggregates) {
    json topics = json::array();
    for (std::size_t i = 0; i < kNumTopics; ++i) {
      const TimeByGender& t = agg.per_topic[i];
      if (!HasTime(t)) continue;
      topics.push_back({{"topic", topic_key(topic_at(i))},
                        {"female_s", t.female_s},
                        {"male_s", t.male_s}});
    }
    groups.push_back({{"group", agg.group},
                      {"n_dialogues", agg.n_dialogues},
                      {"female_s", agg.global_unique.female_s},
                      {"male_s", agg.global_unique.male_s},
                      {"topics", std::move(topics)}});
  }
  return {{"groups", std::move(groups)}};
}

std::vector<TopicGenderAggregate> aggregates_from_json(const json& doc) {
  try {
    std::vector<TopicGenderAggregate> out;
    for (const auto& g : doc.at("groups")) {
      TopicGenderAggregate agg;
      agg.group = g.at("group").get<std::string>();
      agg.n_dialogues = g.at("n_dialogues").get<std::size_t>();
      agg.global_unique = {g.at("female_s").get<double>(),
                           g.at("male_s").get<double>()};
      for (const auto& row : g.at("topics")) {
        agg.per_topic[index_of(TopicFrom(row))] = {
            row.at("female_s").get<double>(), row.at("male_s").get<double>()};
      }
      out.push_back(std::move(agg));
    }
    return out;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("analytics document: ") + e.what());
  }
}

InputDigest digest_file(const std::filesystem::path& path) {
  std::string bytes = read_file(path);
  return {path.generic_string(), sha256_hex(bytes), bytes.size()};
}

std::string config_hash(const json& config) {
  // nlohmann objects iterate in key order, so dump() is canonical.
  return sha256_hex(config.dump());
}

std::string utc_timestamp() {
  std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::filesystem::path> emit_report(
    const ReportResults& results, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error("cannot create report directory " + out_dir.string() + ": " +
                ec.message());
  }

  std::vector<std::filesystem::path> written;
  auto emit = [&](std::string_view name, std::string_view bytes) {
    std::filesystem::path p = out_dir / name;
    write_file(p, bytes);
    written.push_back(std::move(p));
  };

  emit("parity_by_topic.csv", parity_csv(results.aggregates));
  emit("distribution_by_gender.csv", distribution_csv(results.aggregates));
  emit("disparity_by_topic.csv",
       disparity_csv(results.aggregates, results.disparity_mode));
  emit("agreement_by_topic.csv", agreement_csv(results.agreement));

  json scores = json::object();
  if (results.evaluation) scores = to_json(*results.evaluation);
  emit("scores.json", scores.dump(2) + "\n");

  const RunMetadata& m = results.metadata;
  json inputs = json::array();
  for (const auto& d : m.inputs) {
    inputs.push_back({{"path", d.path}, {"sha256", d.sha256}, {"bytes", d.bytes}});
  }
  json manifest = {
      {"command", m.command},
      {"config", m.config},
      {"config_hash", config_hash(m.config)},
      {"seed", m.seed ? json(*m.seed) : json(nullptr)},
      {"inputs", std::move(inputs)},
      {"started_at", m.started_at},
      {"finished_at", utc_timestamp()},
      {"disparity_mode", to_string(results.disparity_mode)},
      {"outputs", json::array()},
  };
  for (const auto& p : written) {
    manifest["outputs"].push_back(
        {{"file", p.filename().string()}, {"sha256", sha256_hex(read_file(p))}});
  }
  emit("run_manifest.json", manifest.dump(2) + "\n");
  return written;
}

}  // namespace newsgauge
