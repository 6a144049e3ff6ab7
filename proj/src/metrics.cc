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

#include "newsgauge/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "newsgauge/error.h"
#include "newsgauge/parallel.h"
#include "newsgauge/random.h"

namespace newsgauge {
namespace {

double SafeDiv(double num, double den) { return den > 0.0 ? num / den : 0.0; }

Scores MakeScores(double tp, double fp, double fn) {
  Scores s;
  s.precision = SafeDiv(tp, tp + fp);
  s.recall = SafeDiv(tp, tp + fn);
  s.f1 = SafeDiv(2.0 * s.precision * s.recall, s.precision + s.recall);
  return s;
}

std::string JoinIds(const std::vector<std::string>& ids) {
  constexpr std::size_t kShown = 10;
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < kShown; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > kShown) {
    out += ", ... (" + std::to_string(ids.size()) + " total)";
  }
  return out;
}

// Per-dialogue contributions, so a resample is a weighted column sum.
struct ContributionRows {
  TopicMatrix tp, fp, fn, tn;

  explicit ContributionRows(const AlignedCorpus& c)
      : tp(c.predicted * c.gold),
        fp(c.predicted * (1.0 - c.gold)),
        fn((1.0 - c.predicted) * c.gold),
        tn((1.0 - c.predicted) * (1.0 - c.gold)) {}

  SoftCounts Weighted(const Eigen::VectorXd& weights) const {
    SoftCounts counts;
    counts.tp = (weights.transpose() * tp.matrix()).transpose().array();
    counts.fp = (weights.transpose() * fp.matrix()).transpose().array();
    counts.fn = (weights.transpose() * fn.matrix()).transpose().array();
    counts.tn = (weights.transpose() * tn.matrix()).transpose().array();
    counts.n_dialogues = static_cast<std::size_t>(weights.sum());
    return counts;
  }
};

}  // namespace

AlignedCorpus align(std::span<const GoldMass> gold,
                    std::span<const LabelSet> predicted) {
  std::map<std::string_view, const GoldMass*> gold_by_id;
  std::map<std::string_view, const LabelSet*> pred_by_id;
  std::vector<std::string> duplicates;
  for (const auto& g : gold) {
    if (!gold_by_id.emplace(g.dialogue_id, &g).second) {
      duplicates.push_back(g.dialogue_id);
    }
  }
  for (const auto& p : predicted) {
    if (!pred_by_id.emplace(p.dialogue_id, &p).second) {
      duplicates.push_back(p.dialogue_id);
    }
  }
  if (!duplicates.empty()) {
    throw ValidationError("duplicate dialogue ids: " + JoinIds(duplicates));
  }

  std::vector<std::string> missing_pred, missing_gold;
  for (const auto& [id, g] : gold_by_id) {
    if (!pred_by_id.count(id)) missing_pred.emplace_back(id);
  }
  for (const auto& [id, p] : pred_by_id) {
    if (!gold_by_id.count(id)) missing_gold.emplace_back(id);
  }
  if (!missing_pred.empty() || !missing_gold.empty()) {
    std::string msg = "gold and predictions cover different dialogues";
    if (!missing_pred.empty()) {
      msg += "; missing predictions: " + JoinIds(missing_pred);
    }
    if (!missing_gold.empty()) msg += "; missing gold: " + JoinIds(missing_gold);
    throw ValidationError(msg);
  }

  AlignedCorpus out;
  const auto n = static_cast<Eigen::Index>(gold_by_id.size());
  out.gold = TopicMatrix::Zero(n, kNumTopics);
  out.predicted = TopicMatrix::Zero(n, kNumTopics);
  Eigen::Index row = 0;
  for (const auto& [id, g] : gold_by_id) {
    out.dialogue_ids.emplace_back(id);
    const LabelSet& p = *pred_by_id.at(id);
    for (std::size_t t = 0; t < kNumTopics; ++t) {
      out.gold(row, static_cast<Eigen::Index>(t)) = g->mass[t];
      out.predicted(row, static_cast<Eigen::Index>(t)) =
          p.topics.contains(topic_at(t)) ? 1.0 : 0.0;
    }
    ++row;
  }
  return out;
}

SoftCounts soft_confusion(const TopicMatrix& gold,
                          const TopicMatrix& predicted) {
  if (gold.rows() != predicted.rows()) {
    throw ValidationError("soft_confusion: gold has " +
                          std::to_string(gold.rows()) + " rows, predictions " +
                          std::to_string(predicted.rows()));
  }
  SoftCounts counts;
  counts.tp = (predicted * gold).colwise().sum().transpose();
  counts.fp = (predicted * (1.0 - gold)).colwise().sum().transpose();
  counts.fn = ((1.0 - predicted) * gold).colwise().sum().transpose();
  counts.tn = ((1.0 - predicted) * (1.0 - gold)).colwise().sum().transpose();
  counts.n_dialogues = static_cast<std::size_t>(gold.rows());
  return counts;
}

SoftCounts soft_confusion(std::span<const GoldMass> gold,
                          std::span<const LabelSet> predicted) {
  AlignedCorpus corpus = align(gold, predicted);
  return soft_confusion(corpus.gold, corpus.predicted);
}

Scores prf(const SoftCounts& counts, Averaging averaging) {
  if (averaging == Averaging::kMicro) {
    return MakeScores(counts.tp.sum(), counts.fp.sum(), counts.fn.sum());
  }
  Scores macro;
  for (const Scores& s : per_topic_scores(counts)) {
    macro.precision += s.precision;
    macro.recall += s.recall;
    macro.f1 += s.f1;
  }
  macro.precision /= kNumTopics;
  macro.recall /= kNumTopics;
  macro.f1 /= kNumTopics;
  return macro;
}

std::array<Scores, kNumTopics> per_topic_scores(const SoftCounts& counts) {
  std::array<Scores, kNumTopics> out;
  for (std::size_t t = 0; t < kNumTopics; ++t) {
    auto i = static_cast<Eigen::Index>(t);
    out[t] = MakeScores(counts.tp(i), counts.fp(i), counts.fn(i));
  }
  return out;
}

Metric parse_metric(std::string_view name) {
  for (Metric m : {Metric::kMicroF1, Metric::kMicroPrecision,
                   Metric::kMicroRecall, Metric::kMacroF1,
                   Metric::kMacroPrecision, Metric::kMacroRecall}) {
    if (to_string(m) == name) return m;
  }
  throw ValidationError("unknown metric '" + std::string(name) + "'");
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::kMicroF1: return "micro_f1";
    case Metric::kMicroPrecision: return "micro_precision";
    case Metric::kMicroRecall: return "micro_recall";
    case Metric::kMacroF1: return "macro_f1";
    case Metric::kMacroPrecision: return "macro_precision";
    case Metric::kMacroRecall: return "macro_recall";
  }
  return "micro_f1";
}

double metric_value(const SoftCounts& counts, Metric metric) {
  switch (metric) {
    case Metric::kMicroF1: return prf(counts, Averaging::kMicro).f1;
    case Metric::kMicroPrecision: return prf(counts, Averaging::kMicro).precision;
    case Metric::kMicroRecall: return prf(counts, Averaging::kMicro).recall;
    case Metric::kMacroF1: return prf(counts, Averaging::kMacro).f1;
    case Metric::kMacroPrecision: return prf(counts, Averaging::kMacro).precision;
    case Metric::kMacroRecall: return prf(counts, Averaging::kMacro).recall;
  }
  return 0.0;
}

BootstrapDistribution bootstrap_distribution(const AlignedCorpus& corpus,
                                             Metric metric, int n_resamples,
                                             std::uint64_t seed,
                                             unsigned jobs) {
  const auto n = static_cast<std::size_t>(corpus.gold.rows());
  if (n == 0) throw ValidationError("bootstrap: empty dataset");
  if (n_resamples < 1) throw ValidationError("bootstrap: n must be >= 1");

  ContributionRows rows(corpus);
  BootstrapDistribution dist;
  dist.point = metric_value(
      rows.Weighted(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n))),
      metric);

  dist.samples.assign(static_cast<std::size_t>(n_resamples), 0.0);
  parallel_for(dist.samples.size(), jobs, [&](std::size_t r) {
    SeededRng rng = SeededRng::ForStream(seed, r);
    Eigen::VectorXd weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
      weights(static_cast<Eigen::Index>(rng.uniform_index(n))) += 1.0;
    }
    dist.samples[r] = metric_value(rows.Weighted(weights), metric);
  });
  std::sort(dist.samples.begin(), dist.samples.end());
  return dist;
}

Interval percentile_interval(const BootstrapDistribution& dist,
                             double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw ValidationError("confidence must be in (0, 1)");
  }
  if (dist.samples.empty()) throw ValidationError("bootstrap: no resamples");
  auto quantile = [&](double q) {
    const auto& s = dist.samples;
    double h = q * static_cast<double>(s.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(h));
    std::size_t hi = std::min(lo + 1, s.size() - 1);
    double frac = h - static_cast<double>(lo);
    return s[lo] + frac * (s[hi] - s[lo]);
  };
  Interval out;
  out.point = dist.point;
  out.lo = quantile((1.0 - confidence) / 2.0);
  out.hi = quantile(1.0 - (1.0 - confidence) / 2.0);
  out.n_resamples = static_cast<int>(dist.samples.size());
  out.confidence = confidence;
  return out;
}

Interval bootstrap_ci(std::span<const GoldMass> gold,
                      std::span<const LabelSet> predicted, Metric metric,
                      int n_resamples, double confidence, std::uint64_t seed,
                      unsigned jobs) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw ValidationError("confidence must be in (0, 1)");
  }
  AlignedCorpus corpus = align(gold, predicted);
  return percentile_interval(
      bootstrap_distribution(corpus, metric, n_resamples, seed, jobs),
      confidence);
}

EvaluationResult evaluate_predictions(std::span<const GoldMass> gold,
                                      std::span<const LabelSet> predicted,
                                      const EvaluationOptions& options) {
  AlignedCorpus corpus = align(gold, predicted);
  if (corpus.dialogue_ids.empty()) throw ValidationError("evaluate: no dialogues");
  EvaluationResult result;
  result.options = options;
  result.n_dialogues = corpus.dialogue_ids.size();
  result.counts = soft_confusion(corpus.gold, corpus.predicted);
  result.micro = prf(result.counts, Averaging::kMicro);
  result.macro = prf(result.counts, Averaging::kMacro);
  result.per_topic = per_topic_scores(result.counts);
  if (options.bootstrap > 0) {
    for (Metric m : {Metric::kMicroF1, Metric::kMicroPrecision,
                     Metric::kMicroRecall, Metric::kMacroF1,
                     Metric::kMacroPrecision, Metric::kMacroRecall}) {
      auto dist = bootstrap_distribution(corpus, m, options.bootstrap,
                                         options.seed, options.jobs);
      result.intervals.push_back({m, percentile_interval(dist, options.confidence)});
    }
  }
  return result;
}

std::optional<double> krippendorff_alpha(
    std::span<const std::pair<int, int>> units) {
  // Coincidence matrix: each two-coder unit adds both ordered pairs with
  // weight 1/(m_u - 1) = 1.
  double o[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (const auto& [a, b] : units) {
    if ((a != 0 && a != 1) || (b != 0 && b != 1)) {
      throw ValidationError("krippendorff_alpha: codings must be 0 or 1");
    }
    o[a][b] += 1.0;
    o[b][a] += 1.0;
  }
  const double n0 = o[0][0] + o[0][1];
  const double n1 = o[1][0] + o[1][1];
  const double n = n0 + n1;
  if (n < 2.0) return std::nullopt;
  const double observed = (o[0][1] + o[1][0]) / n;
  const double expected = 2.0 * n0 * n1 / (n * (n - 1.0));
  if (expected == 0.0) return std::nullopt;
  return 1.0 - observed / expected;
}

std::optional<double> krippendorff_alpha(
    std::span<const std::vector<int>> units) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (units[i].size() != 2) {
      throw ValidationError("krippendorff_alpha: unit " + std::to_string(i) +
                            " has " + std::to_string(units[i].size()) +
                            " codings, expected 2");
    }
    pairs.emplace_back(units[i][0], units[i][1]);
  }
  return krippendorff_alpha(pairs);
}

AgreementResult agreement_report(std::span<const HumanAnnotation> annotations,
                                 std::span<const Dialogue> dialogues) {
  std::map<std::string, std::vector<const HumanAnnotation*>> by_dialogue;
  for (const auto& a : annotations) by_dialogue[a.dialogue_id].push_back(&a);
  std::vector<GoldMass> gold = build_gold_mass(annotations);

  std::unordered_map<std::string_view, double> durations;
  for (const Dialogue& d : dialogues) {
    durations.emplace(d.dialogue_id, d.speech_duration_s);
  }
  const bool with_durations = !dialogues.empty();

  AgreementResult result;
  result.n_dialogues = gold.size();

  std::vector<std::pair<int, int>> pooled;
  pooled.reserve(by_dialogue.size() * kNumTopics);
  std::array<std::vector<std::pair<int, int>>, kNumTopics> per_topic;
  for (const auto& [id, group] : by_dialogue) {
    for (std::size_t t = 0; t < kNumTopics; ++t) {
      std::pair<int, int> unit{group[0]->topics.contains(topic_at(t)) ? 1 : 0,
                               group[1]->topics.contains(topic_at(t)) ? 1 : 0};
      per_topic[t].push_back(unit);
      pooled.push_back(unit);
    }
  }

  double total_mass = 0.0;
  double total_duration = 0.0;
  std::array<double, kNumTopics> topic_duration{};
  for (const GoldMass& g : gold) {
    double duration = 0.0;
    if (with_durations) {
      auto it = durations.find(g.dialogue_id);
      if (it == durations.end()) {
        throw ValidationError("annotated dialogue " + g.dialogue_id +
                              " is missing from the dialogues file");
      }
      duration = it->second;
      total_duration += duration;
    }
    for (std::size_t t = 0; t < kNumTopics; ++t) {
      result.topics[t].mass += g.mass[t];
      topic_duration[t] += g.mass[t] * duration;
    }
    total_mass += g.total();
  }

  for (std::size_t t = 0; t < kNumTopics; ++t) {
    TopicAgreement& ta = result.topics[t];
    ta.alpha = krippendorff_alpha(per_topic[t]);
    ta.mass_share = SafeDiv(ta.mass, total_mass);
    ta.dialogue_share = SafeDiv(ta.mass, static_cast<double>(gold.size()));
    if (with_durations) ta.duration_s = topic_duration[t];
  }
  result.global_alpha = krippendorff_alpha(pooled);
  result.mean_topics_per_dialogue =
      SafeDiv(total_mass, static_cast<double>(gold.size()));
  if (with_durations) result.total_duration_s = total_duration;
  return result;
}

DatasetSplit split_dataset(std::vector<std::string> dialogue_ids,
                           double test_fraction, std::uint64_t seed) {
  if (dialogue_ids.empty()) throw ValidationError("split: no dialogue ids");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ValidationError("split: test_fraction must be in (0, 1)");
  }
  std::sort(dialogue_ids.begin(), dialogue_ids.end());
  if (std::adjacent_find(dialogue_ids.begin(), dialogue_ids.end()) !=
      dialogue_ids.end()) {
    throw ValidationError("split: duplicate dialogue ids");
  }
  SeededRng rng(seed);
  rng.shuffle(std::span<std::string>(dialogue_ids));

  auto n_test = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(dialogue_ids.size())));
  DatasetSplit split;
  split.test.assign(dialogue_ids.begin(),
                    dialogue_ids.begin() + static_cast<std::ptrdiff_t>(n_test));
  split.dev.assign(dialogue_ids.begin() + static_cast<std::ptrdiff_t>(n_test),
                   dialogue_ids.end());
  std::sort(split.test.begin(), split.test.end());
  std::sort(split.dev.begin(), split.dev.end());
  return split;
}

}  // namespace newsgauge
