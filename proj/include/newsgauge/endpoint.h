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

#ifndef NEWSGAUGE_ENDPOINT_H_
#define NEWSGAUGE_ENDPOINT_H_

#include <string>
#include <string_view>

namespace newsgauge {

// "http://host:port/prefix" split into the part httplib connects to and the
// path prefix prepended to every request path.
struct Endpoint {
  std::string scheme_host_port;
  std::string base_path;  // no trailing slash; may be empty

  std::string path(std::string_view suffix) const {
    return base_path + std::string(suffix);
  }
};

// Throws ValidationError unless the scheme is http or https and a host is
// present.
Endpoint parse_endpoint(std::string_view url);

}  // namespace newsgauge

#endif  // NEWSGAUGE_ENDPOINT_H_
