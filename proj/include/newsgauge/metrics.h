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

#ifndef NEWSGAUGE_METRICS_H_
#define NEWSGAUGE_METRICS_H_

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "newsgauge/corpus_model.h"
#include "newsgauge/ingest.h"

namespace newsgauge {

// One row per dialogue, one column per topic in canonical order.
using TopicMatrix =
    Eigen::Array<double, Eigen::Dynamic, static_cast<int>(kNumTopics),
                 Eigen::RowMajor>;
using TopicArray = Eigen::Array<double, static_cast<int>(kNumTopics), 1>;

// Soft confusion counts per topic. A (dialogue, topic) pair with gold mass p
// adds p to tp and 1-p to fp when predicted, p to fn and 1-p to tn otherwise.
struct SoftCounts {
  TopicArray tp = TopicArray::Zero();
  TopicArray fp = TopicArray::Zero();
  TopicArray fn = TopicArray::Zero();
  TopicArray tn = TopicArray::Zero();
  std::size_t n_dialogues = 0;
};

// Gold masses and 0/1 predictions joined on dialogue id (sorted by id).
struct AlignedCorpus {
  std::vector<std::string> dialogue_ids;
  TopicMatrix gold;
  TopicMatrix predicted;
};

// Throws ValidationError listing ids present on only one side, or ids
// repeated within one side.
AlignedCorpus align(std::span<const GoldMass> gold,
                    std::span<const LabelSet> predicted);

SoftCounts soft_confusion(const TopicMatrix& gold, const TopicMatrix& predicted);
SoftCounts soft_confusion(std::span<const GoldMass> gold,
                          std::span<const LabelSet> predicted);

enum class Averaging { kMicro, kMacro };

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Micro pools tp/fp/fn over topics; macro averages per-topic scores over all
// 18 topics. Zero denominators give 0.
Scores prf(const SoftCounts& counts, Averaging averaging);
std::array<Scores, kNumTopics> per_topic_scores(const SoftCounts& counts);

enum class Metric {
  kMicroF1,
  kMicroPrecision,
  kMicroRecall,
  kMacroF1,
  kMacroPrecision,
  kMacroRecall,
};

// "micro_f1", "macro_precision", ...
Metric parse_metric(std::string_view name);
std::string_view to_string(Metric metric);
double metric_value(const SoftCounts& counts, Metric metric);

struct Interval {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int n_resamples = 0;
  double confidence = 0.0;
};

// Metric value on the full sample and on each resample, sorted ascending.
// Resample i draws dialogues with replacement from
// SeededRng::ForStream(seed, i), so the result does not depend on `jobs`.
struct BootstrapDistribution {
  double point = 0.0;
  std::vector<double> samples;
};

BootstrapDistribution bootstrap_distribution(const AlignedCorpus& corpus,
                                             Metric metric, int n_resamples,
                                             std::uint64_t seed,
                                             unsigned jobs = 1);

// Percentile interval with linear interpolation between order statistics
// at (1-c)/2 and 1-(1-c)/2.
Interval percentile_interval(const BootstrapDistribution& dist,
                             double confidence);

Interval bootstrap_ci(std::span<const GoldMass> gold,
                      std::span<const LabelSet> predicted, Metric metric,
                      int n_resamples, double confidence, std::uint64_t seed,
                      unsigned jobs = 1);

struct EvaluationOptions {
  int bootstrap = 1000;  // resamples; 0 skips confidence intervals
  double confidence = 0.95;
  std::uint64_t seed = 42;
  unsigned jobs = 1;
};

struct MetricInterval {
  Metric metric;
  Interval interval;
};

// Everything a scores table needs: soft counts, micro/macro/per-topic
// scores, and a bootstrap interval for each of the six summary metrics.
struct EvaluationResult {
  std::size_t n_dialogues = 0;
  SoftCounts counts;
  Scores micro;
  Scores macro;
  std::array<Scores, kNumTopics> per_topic{};
  EvaluationOptions options;
  std::vector<MetricInterval> intervals;
};

EvaluationResult evaluate_predictions(std::span<const GoldMass> gold,
                                      std::span<const LabelSet> predicted,
                                      const EvaluationOptions& options);

// Krippendorff's alpha for binary nominal codings, two coders per unit.
// Returns nullopt when expected disagreement is zero (a single value seen).
std::optional<double> krippendorff_alpha(
    std::span<const std::pair<int, int>> units);
// Same, for units given as coding lists; each must hold exactly 2 values.
std::optional<double> krippendorff_alpha(
    std::span<const std::vector<int>> units);

struct TopicAgreement {
  std::optional<double> alpha;
  double mass = 0.0;        // sum of gold mass over dialogues
  double mass_share = 0.0;  // mass / total mass over all topics
  // mass / number of dialogues. Multi-label dialogues make these sum past 1.
  double dialogue_share = 0.0;
  std::optional<double> duration_s;
};

struct AgreementResult {
  std::array<TopicAgreement, kNumTopics> topics;
  std::optional<double> global_alpha;
  std::size_t n_dialogues = 0;
  // Mean topics per annotation, i.e. mean of GoldMass::total().
  double mean_topics_per_dialogue = 0.0;
  std::optional<double> total_duration_s;
};

// Per-topic alpha uses dialogues as units; the global alpha pools every
// (dialogue, topic) pair as one unit. Durations need `dialogues` (pass an
// empty span to skip them); every annotated dialogue must then be present.
AgreementResult agreement_report(std::span<const HumanAnnotation> annotations,
                                 std::span<const Dialogue> dialogues);

struct DatasetSplit {
  std::vector<std::string> dev;
  std::vector<std::string> test;
};

// Sorts the ids, shuffles them with SeededRng(seed) and takes the first
// round(test_fraction * n) as test. Both halves come back sorted.
DatasetSplit split_dataset(std::vector<std::string> dialogue_ids,
                           double test_fraction, std::uint64_t seed);

}  // namespace newsgauge

#endif  // NEWSGAUGE_METRICS_H_
