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

// Standalone mock inference server for local pipeline runs.
//
//   mock_chat_server --port 8000 --responses replies.json

#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "mock/mock_server.h"
#include "newsgauge/io.h"

namespace {
volatile std::sig_atomic_t g_stop = 0;
}

int main(int argc, char** argv) {
  CLI::App app{"Mock chat-completions and /classify server"};
  int port = 8000;
  std::string responses;
  app.add_option("--port", port, "Port on 127.0.0.1 (0 = any)");
  app.add_option("--responses", responses, "Reply configuration JSON");
  CLI11_PARSE(app, argc, argv);

  newsgauge::mock::MockConfig config;
  try {
    if (!responses.empty()) {
      config = newsgauge::mock::MockConfig::FromJson(newsgauge::read_file(responses));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  newsgauge::mock::MockServer server(std::move(config));
  std::cerr << "listening on " << server.start(port) << "\n";
  std::signal(SIGINT, [](int) { g_stop = 1; });
  std::signal(SIGTERM, [](int) { g_stop = 1; });
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  std::cerr << "served " << server.requests() << " requests\n";
  return 0;
}
