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

#include "mock_server.h"

#include <chrono>
#include <stdexcept>

#include "httplib.h"
#include "json.hpp"

namespace newsgauge::mock {
namespace {

using nlohmann::json;

MockReply ReplyFrom(const json& j) {
  return {j.value("status", 200), j.value("content", "")};
}

class InFlightGuard {
 public:
  InFlightGuard(std::atomic<std::size_t>& current, std::atomic<std::size_t>& peak)
      : current_(current) {
    std::size_t now = ++current_;
    std::size_t prev = peak.load();
    while (now > prev && !peak.compare_exchange_weak(prev, now)) {
    }
  }
  ~InFlightGuard() { --current_; }

 private:
  std::atomic<std::size_t>& current_;
};

}  // namespace

MockConfig MockConfig::FromJson(std::string_view text) {
  json doc = json::parse(text);
  MockConfig c;
  for (const auto& e : doc.value("script", json::array())) {
    c.script.push_back(ReplyFrom(e));
  }
  for (const auto& e : doc.value("rules", json::array())) {
    c.rules.push_back({e.at("contains").get<std::string>(), ReplyFrom(e)});
  }
  if (doc.contains("default")) c.fallback = ReplyFrom(doc["default"]);
  c.delay_ms = doc.value("delay_ms", 0);
  c.taxonomy_fingerprint = doc.value("taxonomy_fingerprint", "");
  return c;
}

struct MockServer::Impl {
  httplib::Server server;
};

MockServer::MockServer(MockConfig config)
    : config_(std::move(config)), impl_(std::make_unique<Impl>()) {
  httplib::Server& s = impl_->server;
  s.new_task_queue = [] { return new httplib::ThreadPool(32); };
  s.set_tcp_nodelay(true);

  s.Get("/", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", "application/json");
  });

  s.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    json body = {{"status", "ok"},
                 {"taxonomy_fingerprint", config_.taxonomy_fingerprint}};
    res.set_content(body.dump(), "application/json");
  });

  s.Post("/v1/chat/completions",
         [this](const httplib::Request& req, httplib::Response& res) {
           InFlightGuard guard(in_flight_, max_in_flight_);
           ++requests_;
           {
             std::lock_guard<std::mutex> lock(mu_);
             authorization_ = req.get_header_value("Authorization");
           }
           std::string text;
           json body = json::parse(req.body, nullptr, false);
           if (!body.is_discarded() && body.contains("messages") &&
               !body["messages"].empty()) {
             text = body["messages"].back().value("content", "");
           }
           MockReply reply = choose(text);
           if (config_.delay_ms > 0) {
             std::this_thread::sleep_for(
                 std::chrono::milliseconds(config_.delay_ms));
           }
           res.status = reply.status;
           if (reply.status != 200) {
             res.set_content(R"({"error":"scripted"})", "application/json");
             return;
           }
           json out = {
               {"id", "mock-" + std::to_string(requests_.load())},
               {"object", "chat.completion"},
               {"choices",
                {{{"index", 0},
                  {"message", {{"role", "assistant"}, {"content", reply.content}}},
                  {"finish_reason", "stop"}}}}};
           res.set_content(out.dump(), "application/json");
         });

  s.Post("/classify", [this](const httplib::Request& req,
                             httplib::Response& res) {
    InFlightGuard guard(in_flight_, max_in_flight_);
    ++requests_;
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.contains("texts")) {
      res.status = 400;
      return;
    }
    json labels = json::array();
    for (const auto& t : body["texts"]) {
      MockReply reply = choose(t.get<std::string>());
      if (reply.status != 200) {
        res.status = reply.status;
        return;
      }
      json parsed = json::parse(reply.content, nullptr, false);
      labels.push_back(parsed.is_array() ? parsed : json::array());
    }
    res.set_content(json{{"labels", labels}}.dump(), "application/json");
  });
}

MockServer::~MockServer() { stop(); }

MockReply MockServer::choose(const std::string& text) {
  std::lock_guard<std::mutex> lock(mu_);
  seen_.push_back(text);
  if (script_pos_ < config_.script.size()) return config_.script[script_pos_++];
  for (const auto& rule : config_.rules) {
    if (text.find(rule.contains) != std::string::npos) return rule.reply;
  }
  return config_.fallback;
}

std::string MockServer::start(int port) {
  httplib::Server& s = impl_->server;
  if (port == 0) {
    port_ = s.bind_to_any_port("127.0.0.1");
  } else {
    port_ = s.bind_to_port("127.0.0.1", port) ? port : -1;
  }
  if (port_ <= 0) throw std::runtime_error("mock server: cannot bind");
  thread_ = std::thread([&s] { s.listen_after_bind(); });
  s.wait_until_ready();
  return url();
}

void MockServer::stop() {
  if (thread_.joinable()) {
    impl_->server.stop();
    thread_.join();
  }
}

std::string MockServer::url() const {
  return "http://127.0.0.1:" + std::to_string(port_);
}

std::vector<std::string> MockServer::seen_texts() const {
  std::lock_guard<std::mutex> lock(mu_);
  return seen_;
}

std::string MockServer::last_authorization() const {
  std::lock_guard<std::mutex> lock(mu_);
  return authorization_;
}

}  // namespace newsgauge::mock

