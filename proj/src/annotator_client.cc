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
#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "newsgauge/annotator.h"
#include "newsgauge/endpoint.h"
#include "newsgauge/error.h"

namespace newsgauge {
namespace {

using nlohmann::json;

bool RetriableStatus(int status) {
  return status == 408 || status == 429 || status >= 500;
}

httplib::Headers AuthHeaders(const std::string& api_key) {
  httplib::Headers headers;
  std::string key = api_key;
  if (key.empty()) {
    if (const char* env = std::getenv("NEWSGAUGE_API_KEY")) key = env;
  }
  if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);
  return headers;
}

}  // namespace

void ClientConfig::validate() const {
  parse_endpoint(endpoint_url);
  if (model.empty()) throw ValidationError("client: model name is empty");
  if (max_in_flight < 1) throw ValidationError("client: max_in_flight must be >= 1");
  if (retry_limit < 0) throw ValidationError("client: retry_limit must be >= 0");
  if (backoff_base_ms < 0 || backoff_max_ms < 0) {
    throw ValidationError("client: backoff must be >= 0");
  }
  if (request_timeout_ms <= 0) {
    throw ValidationError("client: request_timeout_ms must be > 0");
  }
  if (max_tokens <= 0) throw ValidationError("client: max_tokens must be > 0");
  if (temperature < 0.0) throw ValidationError("client: temperature must be >= 0");
}

int backoff_delay_ms(const ClientConfig& cfg, int attempt) {
  double delay = static_cast<double>(cfg.backoff_base_ms);
  for (int i = 0; i < attempt && delay < cfg.backoff_max_ms; ++i) delay *= 2.0;
  return static_cast<int>(std::min<double>(delay, cfg.backoff_max_ms));
}

struct ChatClient::Impl {
  Endpoint endpoint;
  httplib::Client http;
  httplib::Headers headers;

  explicit Impl(const ClientConfig& cfg)
      : endpoint(parse_endpoint(cfg.endpoint_url)),
        http(endpoint.scheme_host_port),
        headers(AuthHeaders(cfg.api_key)) {
    auto timeout = std::chrono::milliseconds(cfg.request_timeout_ms);
    http.set_connection_timeout(timeout);
    http.set_read_timeout(timeout);
    http.set_write_timeout(timeout);
    http.set_keep_alive(true);
    http.set_tcp_nodelay(true);
  }
};

ChatClient::ChatClient(const ClientConfig& cfg)
    : cfg_(cfg), impl_(std::make_unique<Impl>(cfg)) {}

ChatClient::~ChatClient() = default;

CompletionResult ChatClient::complete(const ChatRequest& request) {
  CompletionResult out;
  auto res = impl_->http.Post(impl_->endpoint.path("/v1/chat/completions"),
                              impl_->headers, request.to_json(),
                              "application/json");
  if (!res) {
    out.retriable = true;
    out.error = "transport error: " + httplib::to_string(res.error());
    return out;
  }
  out.http_status = res->status;
  if (res->status != 200) {
    out.retriable = RetriableStatus(res->status);
    out.error = "HTTP " + std::to_string(res->status);
    return out;
  }
  json body = json::parse(res->body, nullptr, /*allow_exceptions=*/false);
  try {
    if (body.is_discarded()) throw std::runtime_error("body is not JSON");
    out.content = body.at("choices").at(0).at("message").at("content")
                      .get<std::string>();
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = std::string("malformed completion response: ") + e.what();
  }
  return out;
}

CompletionResult ChatClient::complete_with_retry(const ChatRequest& request,
                                                 int* retries) {
  int attempt = 0;
  for (;;) {
    CompletionResult res = complete(request);
    if (res.ok || !res.retriable || attempt >= cfg_.retry_limit) {
      if (retries) *retries = attempt;
      return res;
    }
    std::this_thread::sleep_for(
        std::chrono::milliseconds(backoff_delay_ms(cfg_, attempt)));
    ++attempt;
  }
}

void probe_endpoint(const ClientConfig& cfg) {
  Endpoint ep = parse_endpoint(cfg.endpoint_url);
  httplib::Client http(ep.scheme_host_port);
  auto timeout = std::chrono::milliseconds(
      std::min(cfg.request_timeout_ms, 10000));
  http.set_connection_timeout(timeout);
  http.set_read_timeout(timeout);
  auto res = http.Get(ep.path("/"));
  if (!res) {
    throw Error("endpoint " + cfg.endpoint_url +
                " is unreachable: " + httplib::to_string(res.error()));
  }
}

}  // namespace newsgauge
