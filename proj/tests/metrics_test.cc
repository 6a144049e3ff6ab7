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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "newsgauge/error.h"
#include "newsgauge/metrics.h"
#include "newsgauge/random.h"
#include "support/oracles.h"

namespace newsgauge {
namespace {

GoldMass Gold(std::string id, std::vector<std::pair<TopicId, double>> masses) {
  GoldMass g;
  g.dialogue_id = std::move(id);
  for (auto [t, m] : masses) g.mass[index_of(t)] = m;
  return g;
}

TEST_CASE("single-pair confusion cases") {
  struct Case {
    double p;
    bool predicted;
    double tp, fp, fn, tn;
  };
  for (Case c : {Case{1, true, 1, 0, 0, 0}, Case{0.5, true, 0.5, 0.5, 0, 0},
                 Case{0.5, false, 0, 0, 0.5, 0.5}, Case{0, true, 0, 1, 0, 0},
                 Case{0, false, 0, 0, 0, 1}, Case{1, false, 0, 0, 1, 0}}) {
    std::vector<GoldMass> g = {Gold("d", {{TopicId::kSport, c.p}})};
    std::vector<LabelSet> p = {{"d", {}}};
    if (c.predicted) p[0].topics.insert(TopicId::kSport);
    SoftCounts s = soft_confusion(g, p);
    std::size_t k = index_of(TopicId::kSport);
    CHECK(s.tp(k) == c.tp);
    CHECK(s.fp(k) == c.fp);
    CHECK(s.fn(k) == c.fn);
    CHECK(s.tn(k) == c.tn);
  }
}

TEST_CASE("worked micro example") {
  std::vector<GoldMass> g = {
      Gold("D1", {{TopicId::kSport, 1}, {TopicId::kHealth, 0.5}}),
      Gold("D2", {{TopicId::kHealth, 1}})};
  std::vector<LabelSet> p = {{"D2", {TopicId::kSport, TopicId::kHealth}},
                             {"D1", {TopicId::kSport}}};
  SoftCounts c = soft_confusion(g, p);
  CHECK(c.tp.sum() == 2.0);
  CHECK(c.fp.sum() == 1.0);
  CHECK(c.fn.sum() == 0.5);
  Scores s = prf(c, Averaging::kMicro);
  CHECK(s.precision == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(s.recall == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(s.f1 == doctest::Approx(0.7272727272727).epsilon(1e-9));
}

TEST_CASE("trivial prf cases") {
  std::vector<GoldMass> g = {
      Gold("a", {{TopicId::kSport, 1}, {TopicId::kHealth, 0.5}}),
      Gold("b", {{TopicId::kWeather, 1}})};
  std::vector<LabelSet> inter = {{"a", {TopicId::kSport}}, {"b", {TopicId::kWeather}}};
  CHECK(prf(soft_confusion(g, inter), Averaging::kMicro).precision == 1.0);
  std::vector<LabelSet> none = {{"a", {}}, {"b", {}}};
  Scores z = prf(soft_confusion(g, none), Averaging::kMicro);
  CHECK(z.precision == 0.0);
  CHECK(z.recall == 0.0);
  CHECK(z.f1 == 0.0);
}

TEST_CASE("soft confusion and prf match the brute-force oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    auto gold = oracle::RandomGold(rng, 1 + rng() % 20);
    auto pred = oracle::RandomPred(rng, gold);
    std::shuffle(pred.begin(), pred.end(), rng);
    oracle::Counts o = oracle::SoftConfusion(gold, pred);
    SoftCounts c = soft_confusion(gold, pred);
    for (std::size_t t = 0; t < kNumTopics; ++t) {
      CHECK(std::abs(c.tp(t) - o.tp[t]) <= 1e-12);
      CHECK(std::abs(c.fp(t) - o.fp[t]) <= 1e-12);
      CHECK(std::abs(c.fn(t) - o.fn[t]) <= 1e-12);
      CHECK(std::abs(c.tn(t) - o.tn[t]) <= 1e-12);
      // every pair contributes exactly one unit
      CHECK(c.tp(t) + c.fp(t) + c.fn(t) + c.tn(t) ==
            doctest::Approx(static_cast<double>(gold.size())));
      double mass = 0;
      for (const auto& g : gold) mass += g.mass[t];
      CHECK(c.tp(t) + c.fn(t) == doctest::Approx(mass));
    }
    auto mi = prf(c, Averaging::kMicro);
    auto ma = prf(c, Averaging::kMacro);
    auto omi = oracle::Micro(o);
    auto oma = oracle::Macro(o);
    CHECK(std::abs(mi.f1 - omi.f) <= 1e-12);
    CHECK(std::abs(mi.precision - omi.p) <= 1e-12);
    CHECK(std::abs(mi.recall - omi.r) <= 1e-12);
    CHECK(std::abs(ma.f1 - oma.f) <= 1e-12);
    CHECK(std::abs(ma.precision - oma.p) <= 1e-12);
    CHECK(std::abs(ma.recall - oma.r) <= 1e-12);
  }
}

TEST_CASE("micro equals macro when every topic has the same counts") {
  SoftCounts c;
  c.tp.setConstant(3);
  c.fp.setConstant(1);
  c.fn.setConstant(2);
  c.tn.setConstant(4);
  Scores mi = prf(c, Averaging::kMicro), ma = prf(c, Averaging::kMacro);
  CHECK(mi.f1 == doctest::Approx(ma.f1).epsilon(1e-12));
  CHECK(mi.precision == doctest::Approx(ma.precision).epsilon(1e-12));
}

TEST_CASE("align reports missing and duplicate ids") {
  std::vector<GoldMass> g = {Gold("a", {}), Gold("b", {})};
  std::vector<LabelSet> p = {{"a", {}}, {"c", {}}};
  try {
    align(g, p);
    FAIL("expected error");
  } catch (const ValidationError& e) {
    std::string msg = e.what();
    CHECK(msg.find("b") != std::string::npos);
    CHECK(msg.find("c") != std::string::npos);
  }
  std::vector<LabelSet> dup = {{"a", {}}, {"a", {}}, {"b", {}}};
  CHECK_THROWS_AS(align(g, dup), ValidationError);
}

TEST_CASE("metric names") {
  for (Metric m : {Metric::kMicroF1, Metric::kMicroPrecision, Metric::kMicroRecall,
                   Metric::kMacroF1, Metric::kMacroPrecision, Metric::kMacroRecall}) {
    CHECK(parse_metric(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_metric("accuracy"), ValidationError);
}

std::pair<std::vector<GoldMass>, std::vector<LabelSet>> Noisy(std::size_t n,
                                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto gold = oracle::RandomGold(rng, n);
  std::vector<LabelSet> pred;
  std::bernoulli_distribution keep(0.7), spurious(0.03);
  for (const auto& g : gold) {
    LabelSet ls{g.dialogue_id, {}};
    for (std::size_t t = 0; t < kNumTopics; ++t) {
      if ((g.mass[t] > 0 && keep(rng)) || spurious(rng)) ls.topics.insert(topic_at(t));
    }
    pred.push_back(ls);
  }
  return {gold, pred};
}

TEST_CASE("bootstrap is deterministic and independent of jobs") {
  auto [g, p] = Noisy(120, 3);
  Interval a = bootstrap_ci(g, p, Metric::kMicroF1, 200, 0.95, 42, 1);
  Interval b = bootstrap_ci(g, p, Metric::kMicroF1, 200, 0.95, 42, 3);
  CHECK(a.point == b.point);
  CHECK(a.lo == b.lo);
  CHECK(a.hi == b.hi);
  CHECK(a.lo <= a.point);
  CHECK(a.point <= a.hi);
  Interval c = bootstrap_ci(g, p, Metric::kMicroF1, 200, 0.95, 43, 1);
  CHECK((c.lo != a.lo || c.hi != a.hi));
}

TEST_CASE("bootstrap degenerate distribution") {
  std::vector<GoldMass> g = {Gold("only", {{TopicId::kSport, 1}, {TopicId::kHealth, 0.5}})};
  std::vector<LabelSet> p = {{"only", {TopicId::kSport}}};
  Interval iv = bootstrap_ci(g, p, Metric::kMacroF1, 100, 0.95, 1);
  CHECK(iv.lo == iv.point);
  CHECK(iv.hi == iv.point);
}

TEST_CASE("bootstrap intervals nest across confidence levels") {
  auto [g, p] = Noisy(80, 5);
  AlignedCorpus corpus = align(g, p);
  auto dist = bootstrap_distribution(corpus, Metric::kMicroF1, 300, 9);
  CHECK(std::is_sorted(dist.samples.begin(), dist.samples.end()));
  Interval narrow = percentile_interval(dist, 0.8);
  Interval wide = percentile_interval(dist, 0.95);
  CHECK(wide.lo <= narrow.lo);
  CHECK(narrow.hi <= wide.hi);
}

TEST_CASE("percentile interpolation") {
  BootstrapDistribution d{0.5, {0.0, 1.0, 2.0, 3.0, 4.0}};
  Interval iv = percentile_interval(d, 0.5);  // quantiles 0.25 and 0.75
  CHECK(iv.lo == doctest::Approx(1.0));
  CHECK(iv.hi == doctest::Approx(3.0));
  BootstrapDistribution e{0.5, {0.0, 1.0}};
  Interval iv2 = percentile_interval(e, 0.9);  // 0.05 and 0.95
  CHECK(iv2.lo == doctest::Approx(0.05));
  CHECK(iv2.hi == doctest::Approx(0.95));
}

TEST_CASE("bootstrap resample i uses stream i of the seed") {
  auto [g, p] = Noisy(30, 8);
  AlignedCorpus corpus = align(g, p);
  auto dist = bootstrap_distribution(corpus, Metric::kMicroRecall, 5, 100);
  std::vector<double> manual;
  for (int i = 0; i < 5; ++i) {
    SeededRng rng = SeededRng::ForStream(100, i);
    std::vector<GoldMass> rg;
    std::vector<LabelSet> rp;
    for (std::size_t k = 0; k < g.size(); ++k) {
      std::size_t j = rng.uniform_index(corpus.dialogue_ids.size());
      const std::string& id = corpus.dialogue_ids[j];
      auto gi = std::find_if(g.begin(), g.end(), [&](auto& x) { return x.dialogue_id == id; });
      auto pi = std::find_if(p.begin(), p.end(), [&](auto& x) { return x.dialogue_id == id; });
      GoldMass gm = *gi;
      gm.dialogue_id = std::to_string(k);
      LabelSet ls = *pi;
      ls.dialogue_id = std::to_string(k);
      rg.push_back(gm);
      rp.push_back(ls);
    }
    manual.push_back(oracle::Micro(oracle::SoftConfusion(rg, rp)).r);
  }
  std::sort(manual.begin(), manual.end());
  REQUIRE(dist.samples.size() == manual.size());
  for (std::size_t i = 0; i < manual.size(); ++i) {
    CHECK(dist.samples[i] == doctest::Approx(manual[i]).epsilon(1e-12));
  }
}

TEST_CASE("evaluate_predictions fills every interval") {
  auto [g, p] = Noisy(50, 4);
  EvaluationOptions opt;
  opt.bootstrap = 50;
  EvaluationResult r = evaluate_predictions(g, p, opt);
  CHECK(r.n_dialogues == 50);
  CHECK(r.intervals.size() == 6);
  CHECK(r.intervals[0].interval.point == doctest::Approx(r.micro.f1));
  opt.bootstrap = 0;
  CHECK(evaluate_predictions(g, p, opt).intervals.empty());
}

TEST_CASE("krippendorff alpha fixtures") {
  std::vector<std::pair<int, int>> u = {{1, 1}, {1, 0}, {0, 0}, {0, 0}};
  auto a = krippendorff_alpha(u);
  REQUIRE(a);
  CHECK(*a == doctest::Approx(1.0 - 0.25 / (30.0 / 56.0)).epsilon(1e-12));
  CHECK(*a == doctest::Approx(0.5333).epsilon(5e-4));
  std::vector<std::pair<int, int>> agree = {{1, 1}, {0, 0}, {1, 1}};
  CHECK(krippendorff_alpha(agree) == 1.0);
  std::vector<std::pair<int, int>> split = {{1, 0}, {1, 0}, {0, 1}};
  CHECK(*krippendorff_alpha(split) < 0.0);
  std::vector<std::pair<int, int>> flat = {{1, 1}, {1, 1}};
  CHECK_FALSE(krippendorff_alpha(flat));
  std::vector<std::vector<int>> bad = {{1, 0, 1}};
  CHECK_THROWS_AS(krippendorff_alpha(bad), ValidationError);
}

TEST_CASE("krippendorff alpha matches pair counting and is order invariant") {
  std::mt19937_64 rng(99);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<int, int>> units(1 + rng() % 30);
    for (auto& u : units) u = {coin(rng), coin(rng)};
    auto got = krippendorff_alpha(units);
    auto want = oracle::Alpha(units);
    REQUIRE(got.has_value() == want.has_value());
    if (!got) continue;
    CHECK(std::abs(*got - *want) <= 1e-12);
    auto swapped = units;
    for (auto& u : swapped) std::swap(u.first, u.second);
    std::shuffle(swapped.begin(), swapped.end(), rng);
    CHECK(std::abs(*krippendorff_alpha(swapped) - *got) <= 1e-12);
  }
}

HumanAnnotation Ann(std::string d, std::string a, TopicSet t) {
  HumanAnnotation h;
  h.dialogue_id = std::move(d);
  h.annotator_id = std::move(a);
  h.topics = t;
  return h;
}

TEST_CASE("agreement report") {
  std::vector<HumanAnnotation> anns = {
      Ann("d1", "A", {TopicId::kSport}), Ann("d1", "B", {TopicId::kSport}),
      Ann("d2", "A", {TopicId::kWeather}),
      Ann("d2", "B", {TopicId::kWeather, TopicId::kHealth})};
  std::vector<Dialogue> ds(2);
  ds[0].dialogue_id = "d1";
  ds[0].speech_duration_s = 10;
  ds[1].dialogue_id = "d2";
  ds[1].speech_duration_s = 20;
  AgreementResult r = agreement_report(anns, ds);
  CHECK(r.n_dialogues == 2);
  CHECK(r.topics[index_of(TopicId::kSport)].alpha == 1.0);
  CHECK(r.topics[index_of(TopicId::kHealth)].mass == 0.5);
  CHECK(r.topics[index_of(TopicId::kHealth)].mass_share == doctest::Approx(0.5 / 2.5));
  CHECK(r.topics[index_of(TopicId::kHealth)].dialogue_share == doctest::Approx(0.25));
  CHECK(r.topics[index_of(TopicId::kHealth)].duration_s == doctest::Approx(10.0));
  CHECK(r.topics[index_of(TopicId::kWeather)].duration_s == doctest::Approx(20.0));
  CHECK(r.mean_topics_per_dialogue == doctest::Approx(1.25));
  CHECK(r.total_duration_s == doctest::Approx(30.0));
  // global alpha pools 2 x 18 binary units
  std::vector<std::pair<int, int>> pooled;
  for (const auto& d : {std::pair{TopicSet{TopicId::kSport}, TopicSet{TopicId::kSport}},
                        std::pair{TopicSet{TopicId::kWeather},
                                  TopicSet{TopicId::kWeather, TopicId::kHealth}}}) {
    for (std::size_t t = 0; t < kNumTopics; ++t) {
      pooled.emplace_back(d.first.contains(topic_at(t)), d.second.contains(topic_at(t)));
    }
  }
  CHECK(*r.global_alpha == doctest::Approx(*oracle::Alpha(pooled)).epsilon(1e-12));
  CHECK_FALSE(agreement_report(anns, {}).total_duration_s);
}

TEST_CASE("identical annotators give alpha 1 everywhere it is defined") {
  std::vector<HumanAnnotation> anns;
  for (int i = 0; i < 10; ++i) {
    TopicSet t{topic_at(i % 3 + 5)};
    anns.push_back(Ann("d" + std::to_string(i), "A", t));
    anns.push_back(Ann("d" + std::to_string(i), "B", t));
  }
  AgreementResult r = agreement_report(anns, {});
  CHECK(r.global_alpha == 1.0);
  for (const auto& t : r.topics) {
    if (t.alpha) CHECK(*t.alpha == 1.0);
  }
}

TEST_CASE("split_dataset") {
  std::vector<std::string> ids;
  for (int i = 0; i < 804; ++i) ids.push_back("d" + std::to_string(i));
  DatasetSplit s = split_dataset(ids, 0.7525, 42);
  CHECK(s.test.size() == 605);
  CHECK(s.dev.size() == 199);
  DatasetSplit again = split_dataset(ids, 0.7525, 42);
  CHECK(s.test == again.test);
  std::vector<std::string> all = s.test;
  all.insert(all.end(), s.dev.begin(), s.dev.end());
  std::sort(all.begin(), all.end());
  std::sort(ids.begin(), ids.end());
  CHECK(all == ids);
  DatasetSplit two = split_dataset({"a", "b"}, 0.5, 1);
  CHECK(two.test.size() == 1);
  CHECK(two.dev.size() == 1);
  CHECK_THROWS_AS(split_dataset({}, 0.5, 1), ValidationError);
  CHECK_THROWS_AS(split_dataset({"a"}, 1.0, 1), ValidationError);
}

TEST_CASE("SeededRng is reproducible and bounded") {
  SeededRng a(5), b(5);
  for (int i = 0; i < 100; ++i) {
    std::size_t x = a.uniform_index(7);
    CHECK(x == b.uniform_index(7));
    CHECK(x < 7);
  }
  SeededRng s01 = SeededRng::ForStream(0, 1), s10 = SeededRng::ForStream(1, 0);
  SeededRng s01b = SeededRng::ForStream(0, 1);
  std::uint64_t v = s01.next();
  CHECK(v != s10.next());
  CHECK(v == s01b.next());
}

}  // namespace
}  // namespace newsgauge
