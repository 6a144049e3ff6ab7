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

#ifndef NEWSGAUGE_TOOLS_MOCK_MOCK_SERVER_H_
#define NEWSGAUGE_TOOLS_MOCK_MOCK_SERVER_H_

#include <atomic>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace newsgauge::mock {

struct MockReply {
  int status = 200;
  std::string content;  // assistant message text; ignored for non-200
};

// A reply chosen when the request text contains `contains`.
struct MockRule {
  std::string contains;
  MockReply reply;
};

// Scripted replies are consumed in arrival order across all requests; once
// exhausted, the first matching rule answers, then the default.
struct MockConfig {
  std::vector<MockReply> script;
  std::vector<MockRule> rules;
  MockReply fallback{200, R"(["autre"])"};
  int delay_ms = 0;
  // Reported by GET /health for the classify protocol.
  std::string taxonomy_fingerprint;

  // {"script": [{status, content}], "rules": [{contains, status, content}],
  //  "default": {status, content}, "delay_ms": n, "taxonomy_fingerprint": s}
  static MockConfig FromJson(std::string_view json);
};

// In-process HTTP server speaking both /v1/chat/completions and
// /classify + /health. The chat rule text is matched against the last
// message; the classify rule text against each input and its content is
// parsed as a JSON list of labels.
class MockServer {
 public:
  explicit MockServer(MockConfig config);
  ~MockServer();
  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  // Binds 127.0.0.1 (any port when port == 0) and serves on a background
  // thread. Returns the base URL.
  std::string start(int port = 0);
  void stop();
  std::string url() const;

  std::size_t requests() const { return requests_.load(); }
  std::size_t max_in_flight() const { return max_in_flight_.load(); }
  // Last user message of each chat request, in arrival order.
  std::vector<std::string> seen_texts() const;
  std::string last_authorization() const;

 private:
  struct Impl;
  MockReply choose(const std::string& text);

  MockConfig config_;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<std::size_t> requests_{0};
  std::atomic<std::size_t> in_flight_{0};
  std::atomic<std::size_t> max_in_flight_{0};
  mutable std::mutex mu_;
  std::size_t script_pos_ = 0;
  std::vector<std::string> seen_;
  std::string authorization_;
};

}  // namespace newsgauge::mock

#endif  // NEWSGAUGE_TOOLS_MOCK_MOCK_SERVER_H_
