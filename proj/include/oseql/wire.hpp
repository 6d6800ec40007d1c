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

#pragma once

// JSON wire protocol shared by the stdio and HTTP transports.
//
//   request   {"id": str, "task": "single"|"pair", "code_a": str, "code_b": str|null}
//   response  {"id": str, "class": 0|1, "score": float in [0,1]}
//   batch     {"items": [request...]}  ->  {"items": [response...]}
//
// Decoders are strict: any deviation raises MalformedResponse (client side)
// or InputError (server side).

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "oseql/oracle.hpp"

namespace oseql::wire {

using Json = nlohmann::json;

Json encode_request(const ScoreRequest& request);
Json encode_batch_request(std::span<const ScoreRequest> requests);

Json encode_response(std::string_view id, const Prediction& prediction);
Json encode_batch_response(std::span<const std::string> ids,
                           std::span<const Prediction> predictions);

// Client side. `expected_id` must match the echoed id.
Prediction decode_response(const Json& body, std::string_view expected_id);
std::vector<Prediction> decode_batch_response(
    const Json& body, std::span<const ScoreRequest> requests);

// Server side.
ScoreRequest decode_request(const Json& body);
std::vector<ScoreRequest> decode_batch_request(const Json& body);

// Parses text into JSON, mapping parse errors to MalformedResponse.
Json parse_response_text(std::string_view text);

// Single line, no trailing newline.
std::string dump_line(const Json& body);

}  // namespace oseql::wire
