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

#ifndef NEWSGAUGE_TESTS_SUPPORT_ORACLES_H_
#define NEWSGAUGE_TESTS_SUPPORT_ORACLES_H_

// Reference implementations written without the library's data structures,
// used to cross-check the production code.

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "newsgauge/corpus_model.h"
#include "newsgauge/ingest.h"

namespace newsgauge::oracle {

struct Counts {
  std::array<double, kNumTopics> tp{}, fp{}, fn{}, tn{};
};

// Enumerates every (dialogue, topic) pair and looks up its contribution in
// an explicit table of the six (mass, decision) cases.
inline Counts SoftConfusion(const std::vector<GoldMass>& gold,
                            const std::vector<LabelSet>& pred) {
  struct Case {
    double tp, fp, fn, tn;
  };
  // [mass index: 0, 0.5, 1][predicted]
  const Case table[3][2] = {
      {{0, 0, 0, 1}, {0, 1, 0, 0}},
      {{0, 0, 0.5, 0.5}, {0.5, 0.5, 0, 0}},
      {{0, 0, 1, 0}, {1, 0, 0, 0}},
  };
  std::map<std::string, const LabelSet*> by_id;
  for (const auto& p : pred) by_id[p.dialogue_id] = &p;
  Counts c;
  for (const auto& g : gold) {
    const LabelSet* p = by_id.at(g.dialogue_id);
    for (std::size_t t = 0; t < kNumTopics; ++t) {
      int m = g.mass[t] == 0.0 ? 0 : (g.mass[t] == 0.5 ? 1 : 2);
      const Case& k = table[m][p->topics.contains(topic_at(t)) ? 1 : 0];
      c.tp[t] += k.tp;
      c.fp[t] += k.fp;
      c.fn[t] += k.fn;
      c.tn[t] += k.tn;
    }
  }
  return c;
}

struct Prf {
  double p = 0, r = 0, f = 0;
};

inline Prf Score(double tp, double fp, double fn) {
  Prf s;
  s.p = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  s.r = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  s.f = s.p + s.r > 0 ? 2 * s.p * s.r / (s.p + s.r) : 0.0;
  return s;
}

inline Prf Micro(const Counts& c) {
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t t = 0; t < kNumTopics; ++t) {
    tp += c.tp[t];
    fp += c.fp[t];
    fn += c.fn[t];
  }
  return Score(tp, fp, fn);
}

inline Prf Macro(const Counts& c) {
  Prf m;
  for (std::size_t t = 0; t < kNumTopics; ++t) {
    Prf s = Score(c.tp[t], c.fp[t], c.fn[t]);
    m.p += s.p / kNumTopics;
    m.r += s.r / kNumTopics;
    m.f += s.f / kNumTopics;
  }
  return m;
}

// Krippendorff's alpha by literal pair counting: observed disagreement over
// within-unit ordered pairs, expected disagreement over all ordered pairs of
// pooled values.
inline std::optional<double> Alpha(const std::vector<std::pair<int, int>>& units) {
  std::vector<int> pooled;
  double within_pairs = 0, within_disagree = 0;
  for (auto [a, b] : units) {
    pooled.push_back(a);
    pooled.push_back(b);
    within_pairs += 2;
    within_disagree += (a != b) ? 2 : 0;
  }
  double all_pairs = 0, all_disagree = 0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    for (std::size_t j = 0; j < pooled.size(); ++j) {
      if (i == j) continue;
      all_pairs += 1;
      all_disagree += pooled[i] != pooled[j] ? 1 : 0;
    }
  }
  if (all_disagree == 0) return std::nullopt;
  double d_o = within_disagree / within_pairs;
  double d_e = all_disagree / all_pairs;
  return 1.0 - d_o / d_e;
}

inline std::vector<GoldMass> RandomGold(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> mass(0, 2);
  std::bernoulli_distribution sparse(0.7);
  std::vector<GoldMass> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].dialogue_id = "d" + std::to_string(i);
    for (auto& m : out[i].mass) m = sparse(rng) ? 0.0 : mass(rng) * 0.5;
  }
  return out;
}

inline std::vector<LabelSet> RandomPred(std::mt19937_64& rng,
                                        const std::vector<GoldMass>& gold) {
  std::bernoulli_distribution on(0.25);
  std::vector<LabelSet> out;
  for (const auto& g : gold) {
    LabelSet ls{g.dialogue_id, {}};
    for (std::size_t t = 0; t < kNumTopics; ++t) {
      if (on(rng)) ls.topics.insert(topic_at(t));
    }
    out.push_back(ls);
  }
  return out;
}

}  // namespace newsgauge::oracle

#endif  // NEWSGAUGE_TESTS_SUPPORT_ORACLES_H_
