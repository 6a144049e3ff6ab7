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

#ifndef NEWSGAUGE_ANNOTATOR_H_
#define NEWSGAUGE_ANNOTATOR_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "newsgauge/corpus_model.h"

namespace newsgauge {

// ---------------------------------------------------------------------------
// Prompt construction

struct FewShotExample {
  std::string text;
  TopicSet topics;
};

// JSON array of {text, labels: [...]}. Labels are resolved through the
// taxonomy. Throws ValidationError unless there are exactly 3 examples whose
// labels together cover exactly 3 distinct topics.
std::vector<FewShotExample> load_fewshot(std::string_view json,
                                         const Taxonomy& taxonomy);
// The placeholder set shipped in data/fewshot.json.
std::vector<FewShotExample> builtin_fewshot(const Taxonomy& taxonomy);

struct ChatMessage {
  std::string role;  // system, user or assistant
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 128;

  // Request body for POST /v1/chat/completions.
  std::string to_json() const;
};

struct PromptOptions {
  std::string model = "default";
  double temperature = 0.0;
  int max_tokens = 128;
};

// One system message (task, every category with its description, output
// contract), the few-shot examples as user/assistant pairs, then the
// dialogue as the final user message. Assistant turns list display names as
// a JSON array.
ChatRequest build_prompt(std::string_view dialogue_text,
                         const Taxonomy& taxonomy,
                         std::span<const FewShotExample> fewshot,
                         const PromptOptions& options = {});

// JSON array of display names, as the assistant turns show it.
std::string format_label_answer(const TopicSet& topics,
                                const Taxonomy& taxonomy);

// ---------------------------------------------------------------------------
// Output post-processing

struct PostProcessStats {
  bool parsed_ok = false;        // a JSON array of strings was found
  std::size_t dropped_unknown = 0;
  bool stripped_prose = false;   // text surrounded the array
  bool used_fallback = false;    // nothing usable; labeled `other`
};

struct ParsedLabels {
  TopicSet topics;
  PostProcessStats stats;
};

// Finds the first well-formed JSON array of strings (code fences included),
// maps each element through the taxonomy, drops unknowns and duplicates, and
// falls back to {other} when nothing remains. Never throws on model text.
ParsedLabels parse_llm_output(std::string_view raw, const Taxonomy& taxonomy);

// ---------------------------------------------------------------------------
// Chat client

struct ClientConfig {
  std::string endpoint_url = "http://127.0.0.1:8000";
  std::string model = "default";
  double temperature = 0.0;
  int max_tokens = 128;
  int max_in_flight = 4;
  int retry_limit = 3;
  int backoff_base_ms = 500;
  int backoff_max_ms = 30000;
  int request_timeout_ms = 120000;
  // Bearer token. Empty means NEWSGAUGE_API_KEY from the environment, if set.
  std::string api_key;

  void validate() const;
};

// Exponential backoff before retry number `attempt` (0-based), capped.
int backoff_delay_ms(const ClientConfig& cfg, int attempt);

struct CompletionResult {
  bool ok = false;
  bool retriable = false;
  int http_status = 0;  // 0 on transport failure
  std::string content;
  std::string error;
};

// Blocking client for one endpoint. Not thread-safe: use one per worker.
class ChatClient {
 public:
  explicit ChatClient(const ClientConfig& cfg);
  ~ChatClient();
  ChatClient(const ChatClient&) = delete;
  ChatClient& operator=(const ChatClient&) = delete;

  // One attempt. 429, 408, 5xx and transport errors are retriable.
  CompletionResult complete(const ChatRequest& request);

  // Retries retriable failures up to retry_limit times with backoff.
  // `retries` receives the number of retries performed.
  CompletionResult complete_with_retry(const ChatRequest& request,
                                       int* retries);

 private:
  struct Impl;
  ClientConfig cfg_;
  std::unique_ptr<Impl> impl_;
};

// Throws Error if nothing answers HTTP at the endpoint.
void probe_endpoint(const ClientConfig& cfg);

// ---------------------------------------------------------------------------
// Batch annotation

struct DialogueInput {
  std::string dialogue_id;
  std::string text;
};

struct SyntheticAnnotation {
  std::string dialogue_id;
  std::string text;
  TopicSet topics;
  std::string raw_response;
  PostProcessStats stats;
  int retries = 0;
  std::optional<std::string> error;
};

struct BatchProgress {
  std::size_t completed = 0;
  std::size_t total = 0;
  std::size_t failures = 0;
  std::size_t retries = 0;
  std::size_t fallbacks = 0;
};

// Annotates every dialogue with at most cfg.max_in_flight outstanding
// requests. Results follow input order. A dialogue whose request fails after
// retries gets the fallback label and an error note; the batch continues.
// Throws Error if the endpoint is unreachable before the first request.
std::vector<SyntheticAnnotation> annotate_batch(
    std::span<const DialogueInput> dialogues, const Taxonomy& taxonomy,
    std::span<const FewShotExample> fewshot, const ClientConfig& cfg,
    const std::function<void(const BatchProgress&)>& on_progress = {});

std::string write_synthetic_jsonl(std::span<const SyntheticAnnotation> annotations);
std::vector<SyntheticAnnotation> read_synthetic_jsonl(std::string_view bytes,
                                                       const Taxonomy& taxonomy,
                                                       std::string_view source =
                                                           "synthetic");

// ---------------------------------------------------------------------------
// Distillation set

struct TrainingExample {
  std::string dialogue_id;
  std::string text;
  TopicSet topics;

  friend bool operator==(const TrainingExample&,
                         const TrainingExample&) = default;
};

// One {dialogue_id, text, labels} line per annotation, ordered by
// dialogue_id, labels sorted. Throws ValidationError on an empty input.
std::string export_training_set(std::span<const SyntheticAnnotation> annotations);
std::vector<TrainingExample> parse_training_set(std::string_view bytes,
                                                const Taxonomy& taxonomy);

// ---------------------------------------------------------------------------
// Classification protocol (served student models)

struct ClassifierConfig {
  std::string endpoint_url = "http://127.0.0.1:8100";
  std::size_t batch_size = 32;
  int request_timeout_ms = 120000;
  int retry_limit = 3;
  int backoff_base_ms = 500;
};

// GET /health, then POST /classify {texts} in batches. The served taxonomy
// fingerprint must match `taxonomy`. Labels map through the taxonomy with the
// same unknown-drop and `other` fallback as parse_llm_output.
std::vector<LabelSet> classify_batch(std::span<const DialogueInput> dialogues,
                                     const Taxonomy& taxonomy,
                                     const ClassifierConfig& cfg);

}  // namespace newsgauge

#endif  // NEWSGAUGE_ANNOTATOR_H_
