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

#include "newsgauge/endpoint.h"

#include "newsgauge/error.h"

namespace newsgauge {

Endpoint parse_endpoint(std::string_view url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw ValidationError("endpoint '" + std::string(url) +
                          "' must start with http:// or https://");
  }
  std::string_view scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ValidationError("endpoint '" + std::string(url) +
                          "': unsupported scheme '" + std::string(scheme) + "'");
  }
  std::string_view rest = url.substr(scheme_end + 3);
  auto slash = rest.find('/');
  std::string_view host = rest.substr(0, slash);
  if (host.empty()) {
    throw ValidationError("endpoint '" + std::string(url) + "' has no host");
  }
  Endpoint ep;
  ep.scheme_host_port = std::string(scheme) + "://" + std::string(host);
  if (slash != std::string_view::npos) {
    std::string_view path = rest.substr(slash);
    while (!path.empty() && path.back() == '/') path.remove_suffix(1);
    ep.base_path = std::string(path);
  }
  return ep;
}

}  // namespace newsgauge
