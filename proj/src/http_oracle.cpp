// Copyright 2026 The oseql Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <httplib.h>

#include "oseql/transports.hpp"
#include "oseql/wire.hpp"
#include "retry.hpp"

namespace oseql {

using detail::TransportError;

HttpOracle::HttpOracle(OracleConfig config) : config_(std::move(config)) {
  config_.validate();
  std::string url = config_.target;
  const auto scheme = url.find("://");
  const auto path = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  origin_ = url.substr(0, path);
  if (path != std::string::npos) {
    prefix_ = url.substr(path);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }
}

std::string HttpOracle::post(const std::string& path, const std::string& body) {
  return detail::with_retries(
      config_.retry_count, config_.retry_backoff, "oracle " + origin_, [&] {
        httplib::Client client(origin_);
        const auto secs = std::chrono::duration_cast<std::chrono::microseconds>(
            config_.timeout);
        client.set_connection_timeout(secs);
        client.set_read_timeout(secs);
        client.set_write_timeout(secs);
        auto res = client.Post(prefix_ + path, body, "application/json");
        if (!res) {
          throw TransportError("POST " + path + ": " +
                               httplib::to_string(res.error()));
        }
        if (res->status >= 500) {
          throw TransportError("POST " + path + ": model failure (HTTP " +
                               std::to_string(res->status) + ")");
        }
        if (res->status != 200) {
          throw MalformedResponse("POST " + path + ": protocol violation (HTTP " +
                                  std::to_string(res->status) + "): " +
                                  res->body);
        }
        return res->body;
      });
}

Prediction HttpOracle::score(const ScoreRequest& request) {
  const auto body =
      post("/score", wire::dump_line(wire::encode_request(request)));
  return wire::decode_response(wire::parse_response_text(body), request.id);
}

std::vector<Prediction> HttpOracle::score_batch(
    std::span<const ScoreRequest> requests) {
  if (requests.empty()) return {};
  const auto body = post("/score_batch",
                         wire::dump_line(wire::encode_batch_request(requests)));
  return wire::decode_batch_response(wire::parse_response_text(body), requests);
}

std::string HttpOracle::describe() const { return "http:" + origin_ + prefix_; }

}  // namespace oseql
