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

#include "newsgauge/annotator.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "newsgauge/endpoint.h"
#include "newsgauge/error.h"
#include "newsgauge/io.h"

namespace newsgauge {
namespace {

using nlohmann::json;

SyntheticAnnotation Fallback(const DialogueInput& d, std::string error,
                             int retries) {
  SyntheticAnnotation a;
  a.dialogue_id = d.dialogue_id;
  a.text = d.text;
  a.topics.insert(TopicId::kOther);
  a.stats.used_fallback = true;
  a.retries = retries;
  a.error = std::move(error);
  return a;
}

std::vector<std::string> SortedKeys(const TopicSet& topics) {
  std::vector<std::string> keys = topics.keys();
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

std::vector<SyntheticAnnotation> annotate_batch(
    std::span<const DialogueInput> dialogues, const Taxonomy& taxonomy,
    std::span<const FewShotExample> fewshot, const ClientConfig& cfg,
    const std::function<void(const BatchProgress&)>& on_progress) {
  cfg.validate();
  if (dialogues.empty()) throw ValidationError("annotate: no dialogues");
  if (fewshot.size() != 3) {
    throw ValidationError("annotate: expected 3 few-shot examples");
  }
  probe_endpoint(cfg);

  const PromptOptions prompt_options{cfg.model, cfg.temperature, cfg.max_tokens};
  std::vector<SyntheticAnnotation> results(dialogues.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mu;
  BatchProgress progress;
  progress.total = dialogues.size();
  const std::size_t log_every = std::max<std::size_t>(1, dialogues.size() / 20);

  auto worker = [&] {
    ChatClient client(cfg);
    for (std::size_t i = next++; i < dialogues.size(); i = next++) {
      const DialogueInput& d = dialogues[i];
      SyntheticAnnotation a;
      int retries = 0;
      try {
        ChatRequest req = build_prompt(d.text, taxonomy, fewshot, prompt_options);
        CompletionResult res = client.complete_with_retry(req, &retries);
        if (res.ok) {
          ParsedLabels parsed = parse_llm_output(res.content, taxonomy);
          a.dialogue_id = d.dialogue_id;
          a.text = d.text;
          a.topics = parsed.topics;
          a.raw_response = std::move(res.content);
          a.stats = parsed.stats;
          a.retries = retries;
        } else {
          a = Fallback(d, res.error, retries);
        }
      } catch (const std::exception& e) {
        a = Fallback(d, e.what(), retries);
      }
      if (a.error) {
        spdlog::warn("annotate: dialogue {} failed after {} retries: {}",
                     d.dialogue_id, a.retries, *a.error);
      }

      std::lock_guard<std::mutex> lock(progress_mu);
      ++progress.completed;
      progress.retries += static_cast<std::size_t>(a.retries);
      if (a.error) ++progress.failures;
      if (a.stats.used_fallback) ++progress.fallbacks;
      results[i] = std::move(a);
      if (progress.completed % log_every == 0 ||
          progress.completed == progress.total) {
        spdlog::info("annotate: {}/{} done, {} retries, {} failures, {} fallbacks",
                     progress.completed, progress.total, progress.retries,
                     progress.failures, progress.fallbacks);
      }
      if (on_progress) on_progress(progress);
    }
  };

  std::size_t n_workers = std::min<std::size_t>(
      static_cast<std::size_t>(cfg.max_in_flight), dialogues.size());
  {
    std::vector<std::jthread> workers;
    workers.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) workers.emplace_back(worker);
  }
  return results;
}

std::string write_synthetic_jsonl(
    std::span<const SyntheticAnnotation> annotations) {
  std::string out;
  for (const auto& a : annotations) {
    json obj = {{"dialogue_id", a.dialogue_id},
                {"labels", a.topics.keys()},
                {"text", a.text},
                {"raw_response", a.raw_response},
                {"parsed_ok", a.stats.parsed_ok},
                {"dropped_unknown", a.stats.dropped_unknown},
                {"stripped_prose", a.stats.stripped_prose},
                {"used_fallback", a.stats.used_fallback},
                {"retries", a.retries}};
    if (a.error) obj["error"] = *a.error;
    out += obj.dump(-1, ' ', false, json::error_handler_t::replace);
    out.push_back('\n');
  }
  return out;
}

std::vector<SyntheticAnnotation> read_synthetic_jsonl(std::string_view bytes,
                                                      const Taxonomy& taxonomy,
                                                      std::string_view source) {
  std::vector<SyntheticAnnotation> out;
  for_each_line(bytes, [&](std::string_view line, std::size_t line_no) {
    try {
      json obj = json::parse(line);
      SyntheticAnnotation a;
      a.dialogue_id = obj.at("dialogue_id").get<std::string>();
      a.text = obj.value("text", "");
      for (const auto& l : obj.at("labels")) {
        auto topic = taxonomy.lookup(l.get<std::string>());
        if (!topic) {
          throw ParseError(std::string(source), line_no,
                           "unknown label '" + l.get<std::string>() + "'");
        }
        a.topics.insert(*topic);
      }
      a.raw_response = obj.value("raw_response", "");
      a.stats.parsed_ok = obj.value("parsed_ok", false);
      a.stats.dropped_unknown = obj.value("dropped_unknown", std::size_t{0});
      a.stats.stripped_prose = obj.value("stripped_prose", false);
      a.stats.used_fallback = obj.value("used_fallback", false);
      a.retries = obj.value("retries", 0);
      if (obj.contains("error")) a.error = obj["error"].get<std::string>();
      out.push_back(std::move(a));
    } catch (const json::exception& e) {
      throw ParseError(std::string(source), line_no, e.what());
    }
  });
  return out;
}

std::string export_training_set(
    std::span<const SyntheticAnnotation> annotations) {
  if (annotations.empty()) {
    throw ValidationError("export_training_set: no annotations");
  }
  std::vector<const SyntheticAnnotation*> sorted;
  sorted.reserve(annotations.size());
  for (const auto& a : annotations) sorted.push_back(&a);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto* a, const auto* b) {
                     return a->dialogue_id < b->dialogue_id;
                   });
  std::string out;
  for (const auto* a : sorted) {
    json obj = {{"dialogue_id", a->dialogue_id},
                {"text", a->text},
                {"labels", SortedKeys(a->topics)}};
    out += obj.dump(-1, ' ', false, json::error_handler_t::replace);
    out.push_back('\n');
  }
  return out;
}

std::vector<TrainingExample> parse_training_set(std::string_view bytes,
                                                const Taxonomy& taxonomy) {
  std::vector<TrainingExample> out;
  for_each_line(bytes, [&](std::string_view line, std::size_t line_no) {
    try {
      json obj = json::parse(line);
      TrainingExample ex;
      ex.dialogue_id = obj.at("dialogue_id").get<std::string>();
      ex.text = obj.at("text").get<std::string>();
      for (const auto& l : obj.at("labels")) {
        auto topic = taxonomy.lookup(l.get<std::string>());
        if (!topic) {
          throw ParseError("training set", line_no,
                           "unknown label '" + l.get<std::string>() + "'");
        }
        ex.topics.insert(*topic);
      }
      out.push_back(std::move(ex));
    } catch (const json::exception& e) {
      throw ParseError("training set", line_no, e.what());
    }
  });
  return out;
}

std::vector<LabelSet> classify_batch(std::span<const DialogueInput> dialogues,
                                     const Taxonomy& taxonomy,
                                     const ClassifierConfig& cfg) {
  if (cfg.batch_size == 0) throw ValidationError("classify: batch_size must be > 0");
  Endpoint ep = parse_endpoint(cfg.endpoint_url);
  httplib::Client http(ep.scheme_host_port);
  auto timeout = std::chrono::milliseconds(cfg.request_timeout_ms);
  http.set_connection_timeout(timeout);
  http.set_read_timeout(timeout);
  http.set_write_timeout(timeout);
  http.set_keep_alive(true);
  http.set_tcp_nodelay(true);

  auto health = http.Get(ep.path("/health"));
  if (!health) {
    throw Error("classifier " + cfg.endpoint_url + " is unreachable: " +
                httplib::to_string(health.error()));
  }
  json h = json::parse(health->body, nullptr, false);
  if (health->status != 200 || h.is_discarded() ||
      h.value("status", "") != "ok") {
    throw Error("classifier " + cfg.endpoint_url + " is not healthy");
  }
  if (h.value("taxonomy_fingerprint", "") != taxonomy.fingerprint()) {
    throw ValidationError("classifier " + cfg.endpoint_url +
                          " serves a different taxonomy (fingerprint " +
                          h.value("taxonomy_fingerprint", "<none>") + ")");
  }

  std::vector<LabelSet> out;
  out.reserve(dialogues.size());
  for (std::size_t begin = 0; begin < dialogues.size(); begin += cfg.batch_size) {
    std::size_t end = std::min(dialogues.size(), begin + cfg.batch_size);
    json texts = json::array();
    for (std::size_t i = begin; i < end; ++i) texts.push_back(dialogues[i].text);
    std::string body = json{{"texts", std::move(texts)}}.dump(
        -1, ' ', false, json::error_handler_t::replace);

    httplib::Result res;
    for (int attempt = 0;; ++attempt) {
      res = http.Post(ep.path("/classify"), body, "application/json");
      bool retriable =
          !res || res->status == 429 || res->status == 408 || res->status >= 500;
      if (!retriable || attempt >= cfg.retry_limit) break;
      std::this_thread::sleep_for(
          std::chrono::milliseconds(cfg.backoff_base_ms << std::min(attempt, 16)));
    }
    if (!res) {
      throw Error("classify: transport error: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw Error("classify: HTTP " + std::to_string(res->status));
    }
    json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("labels") ||
        !reply["labels"].is_array() || reply["labels"].size() != end - begin) {
      throw Error("classify: malformed response, expected " +
                  std::to_string(end - begin) + " label lists");
    }
    for (std::size_t i = begin; i < end; ++i) {
      LabelSet ls;
      ls.dialogue_id = dialogues[i].dialogue_id;
      const json& labels = reply["labels"][i - begin];
      if (labels.is_array()) {
        for (const auto& l : labels) {
          if (!l.is_string()) continue;
          if (auto t = taxonomy.lookup(l.get<std::string>())) ls.topics.insert(*t);
        }
      }
      if (ls.topics.empty()) ls.topics.insert(TopicId::kOther);
      out.push_back(std::move(ls));
    }
  }
  return out;
}

}  // namespace newsgauge
