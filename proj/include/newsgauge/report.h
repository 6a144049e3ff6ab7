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

#ifndef NEWSGAUGE_REPORT_H_
#define NEWSGAUGE_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "newsgauge/analytics.h"
#include "newsgauge/metrics.h"

namespace newsgauge {

// Fixed 4-decimal rendering used for every numeric CSV cell; empty when
// missing.
std::string format_fixed4(double value);
std::string format_fixed4(const std::optional<double>& value);

// --- Table payloads. Each returns the complete CSV document.

// group,topic,female_s,male_s,parity; one row per topic with gendered time,
// in canonical order. The group-wide figure lives in disparity_csv.
std::string parity_csv(const std::vector<TopicGenderAggregate>& aggregates);
// group,topic,female,male: per-gender topic distributions.
std::string distribution_csv(const std::vector<TopicGenderAggregate>& aggregates);
// group,topic,global_parity,topic_parity,disparity. Each group is compared
// with its own global parity.
std::string disparity_csv(const std::vector<TopicGenderAggregate>& aggregates,
                          DisparityMode mode);
// topic,alpha,mass,mass_share,dialogue_share,duration_s plus a "total" row.
std::string agreement_csv(const std::optional<AgreementResult>& agreement);
// topic,tp,fp,fn,tn,precision,recall,f1.
std::string scores_by_topic_csv(const EvaluationResult& evaluation);

// --- JSON round trips for stage-to-stage files.

nlohmann::json to_json(const EvaluationResult& evaluation);
EvaluationResult evaluation_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const AgreementResult& agreement);
AgreementResult agreement_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const std::vector<TopicGenderAggregate>& aggregates);
std::vector<TopicGenderAggregate> aggregates_from_json(const nlohmann::json& doc);

struct InputDigest {
  std::string path;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

// Digest of a file on disk. Throws Error if it cannot be read.
InputDigest digest_file(const std::filesystem::path& path);

struct RunMetadata {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  std::vector<InputDigest> inputs;
  std::string started_at;  // ISO-8601 UTC
};

// SHA-256 of the config serialized with sorted keys.
std::string config_hash(const nlohmann::json& config);
std::string utc_timestamp();

struct ReportResults {
  std::vector<TopicGenderAggregate> aggregates;
  DisparityMode disparity_mode = DisparityMode::kParityDifference;
  std::optional<EvaluationResult> evaluation;
  std::optional<AgreementResult> agreement;
  RunMetadata metadata;
};

inline constexpr std::string_view kReportFiles[] = {
    "parity_by_topic.csv",    "distribution_by_gender.csv",
    "disparity_by_topic.csv", "agreement_by_topic.csv",
    "scores.json",            "run_manifest.json",
};

// Writes the six report files into out_dir (created if needed) and returns
// their paths. Only run_manifest.json carries timestamps.
std::vector<std::filesystem::path> emit_report(
    const ReportResults& results, const std::filesystem::path& out_dir);

}  // namespace newsgauge

#endif  // NEWSGAUGE_REPORT_H_
