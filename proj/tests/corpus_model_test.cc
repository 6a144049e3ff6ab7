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

#include <set>

#include "doctest.h"
#include "json.hpp"
#include "newsgauge/corpus_model.h"
#include "newsgauge/defaults.h"
#include "newsgauge/error.h"
#include "newsgauge/io.h"

namespace newsgauge {
namespace {

TEST_CASE("topic keys round trip in canonical order") {
  std::set<std::string_view> seen;
  for (std::size_t i = 0; i < kNumTopics; ++i) {
    TopicId t = topic_at(i);
    CHECK(index_of(t) == i);
    CHECK(topic_from_key(topic_key(t)) == t);
    seen.insert(topic_key(t));
  }
  CHECK(seen.size() == kNumTopics);
  CHECK(topic_key(topic_at(0)) == "religion_belief");
  CHECK(topic_key(topic_at(17)) == "unrest_conflicts_war");
  CHECK_FALSE(topic_from_key("human_interest"));
}

TEST_CASE("TopicSet basics") {
  TopicSet s{TopicId::kSport, TopicId::kHealth};
  CHECK(s.size() == 2);
  CHECK(s.contains(TopicId::kSport));
  s.erase(TopicId::kSport);
  CHECK_FALSE(s.contains(TopicId::kSport));
  CHECK(s.keys() == std::vector<std::string>{"health"});
  CHECK(TopicSet{}.empty());
}

TEST_CASE("normalize_label folds case, accents and whitespace") {
  CHECK(normalize_label("Météo") == "meteo");
  CHECK(normalize_label("  Arts,   Culture\t") == "arts, culture");
  CHECK(normalize_label("ÉCONOMIE") == "economie");
  CHECK(normalize_label("ﬁnance") == "finance");  // compatibility ligature
  CHECK(normalize_label("") == "");
}

TEST_CASE("canonical_topic resolves ids, names and aliases") {
  const Taxonomy& tax = Taxonomy::Builtin();
  CHECK(canonical_topic("sport", tax) == TopicId::kSport);
  CHECK(canonical_topic("Météo", tax) == TopicId::kWeather);
  CHECK(canonical_topic("METEO", tax) == TopicId::kWeather);
  CHECK(canonical_topic(" politique ", tax) == TopicId::kPolitics);
  CHECK(canonical_topic("social_issue", tax) == TopicId::kSocialIssue);
  CHECK_FALSE(canonical_topic("chats mignons", tax));
  CHECK_FALSE(canonical_topic("human_interest", tax));
  CHECK_FALSE(canonical_topic("", tax));
}

TEST_CASE("canonical_topic is idempotent on its own output") {
  const Taxonomy& tax = Taxonomy::Builtin();
  for (const Topic& t : tax.topics()) {
    CHECK(canonical_topic(topic_key(t.id), tax) == t.id);
    CHECK(canonical_topic(t.display_name, tax) == t.id);
    for (const auto& alias : t.aliases) CHECK(canonical_topic(alias, tax) == t.id);
  }
}

TEST_CASE("taxonomy rejects duplicates, collisions and missing topics") {
  auto doc = nlohmann::json::parse(default_taxonomy_json());
  SUBCASE("duplicate id") {
    doc[1]["id"] = doc[0]["id"];
    CHECK_THROWS_AS(Taxonomy::FromJson(doc.dump()), ValidationError);
  }
  SUBCASE("alias collision after normalization") {
    doc[0]["aliases"].push_back("MÉTÉO");
    CHECK_THROWS_AS(Taxonomy::FromJson(doc.dump()), ValidationError);
  }
  SUBCASE("missing topic") {
    doc.erase(doc.size() - 1);
    CHECK_THROWS_AS(Taxonomy::FromJson(doc.dump()), ValidationError);
  }
  SUBCASE("unknown id") {
    doc[0]["id"] = "human_interest";
    CHECK_THROWS_AS(Taxonomy::FromJson(doc.dump()), ValidationError);
  }
  SUBCASE("not json") {
    CHECK_THROWS_AS(Taxonomy::FromJson("{"), ValidationError);
  }
}

TEST_CASE("fingerprint is the sha256 of the newline-joined ids") {
  std::string joined;
  for (std::size_t i = 0; i < kNumTopics; ++i) {
    if (i) joined += '\n';
    joined += topic_key(topic_at(i));
  }
  CHECK(Taxonomy::Builtin().fingerprint() == sha256_hex(joined));
  CHECK(Taxonomy::FromJson(default_taxonomy_json()).fingerprint() ==
        Taxonomy::Builtin().fingerprint());
}

}  // namespace
}  // namespace newsgauge
