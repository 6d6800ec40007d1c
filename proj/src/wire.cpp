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

#include "oseql/wire.hpp"

#include <cmath>

#include "oseql/error.hpp"

namespace oseql::wire {

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw MalformedResponse("malformed oracle response: " + what);
}

[[noreturn]] void bad_request(const std::string& what) {
  throw InputError("malformed scoring request: " + what);
}

}  // namespace

Json encode_request(const ScoreRequest& request) {
  Json j;
  j["id"] = request.id;
  j["task"] = std::string(to_string(request.task));
  j["code_a"] = request.code_a;
  j["code_b"] = request.code_b ? Json(*request.code_b) : Json(nullptr);
  return j;
}

Json encode_batch_request(std::span<const ScoreRequest> requests) {
  Json items = Json::array();
  for (const auto& r : requests) items.push_back(encode_request(r));
  return Json{{"items", std::move(items)}};
}

Json encode_response(std::string_view id, const Prediction& prediction) {
  Json j;
  j["id"] = std::string(id);
  j["class"] = prediction.class_label();
  j["score"] = prediction.score();
  return j;
}

Json encode_batch_response(std::span<const std::string> ids,
                           std::span<const Prediction> predictions) {
  Json items = Json::array();
  for (std::size_t i = 0; i < ids.size() && i < predictions.size(); ++i) {
    items.push_back(encode_response(ids[i], predictions[i]));
  }
  return Json{{"items", std::move(items)}};
}

Prediction decode_response(const Json& body, std::string_view expected_id) {
  if (!body.is_object()) malformed("response is not an object");
  if (body.size() != 3) malformed("response must have exactly id, class, score");
  const auto id = body.find("id");
  const auto cls = body.find("class");
  const auto score = body.find("score");
  if (id == body.end() || !id->is_string()) malformed("missing string 'id'");
  if (id->get<std::string>() != expected_id) {
    malformed("id '" + id->get<std::string>() + "' does not match request '" +
              std::string(expected_id) + "'");
  }
  if (cls == body.end() || !cls->is_number_integer()) {
    malformed("missing integer 'class'");
  }
  const auto label = cls->get<long long>();
  if (label != 0 && label != 1) malformed("'class' must be 0 or 1");
  if (score == body.end() || !score->is_number()) {
    malformed("missing numeric 'score'");
  }
  const double s = score->get<double>();
  if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
    malformed("'score' outside [0,1]");
  }
  Prediction p(s);
  if (p.class_label() != label) {
    malformed("'class' disagrees with score " + std::to_string(s) +
              " at threshold 0.5");
  }
  return p;
}

std::vector<Prediction> decode_batch_response(
    const Json& body, std::span<const ScoreRequest> requests) {
  if (!body.is_object() || !body.contains("items") ||
      !body["items"].is_array()) {
    malformed("batch response must be {\"items\": [...]}");
  }
  const auto& items = body["items"];
  if (items.size() != requests.size()) {
    malformed("batch response has " + std::to_string(items.size()) +
              " items for " + std::to_string(requests.size()) + " requests");
  }
  std::vector<Prediction> out;
  out.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    out.push_back(decode_response(items[i], requests[i].id));
  }
  return out;
}

ScoreRequest decode_request(const Json& body) {
  if (!body.is_object()) bad_request("request is not an object");
  for (const char* key : {"id", "task", "code_a", "code_b"}) {
    if (!body.contains(key)) bad_request(std::string("missing '") + key + "'");
  }
  if (body.size() != 4) bad_request("unexpected extra fields");
  if (!body["id"].is_string()) bad_request("'id' must be a string");
  if (!body["task"].is_string()) bad_request("'task' must be a string");
  if (!body["code_a"].is_string()) bad_request("'code_a' must be a string");

  ScoreRequest r;
  r.id = body["id"].get<std::string>();
  const auto task = body["task"].get<std::string>();
  if (task == "single") {
    r.task = TaskKind::Single;
  } else if (task == "pair") {
    r.task = TaskKind::Paired;
  } else {
    bad_request("'task' must be single or pair");
  }
  r.code_a = body["code_a"].get<std::string>();
  const auto& b = body["code_b"];
  if (b.is_string()) {
    r.code_b = b.get<std::string>();
  } else if (!b.is_null()) {
    bad_request("'code_b' must be a string or null");
  }
  if ((r.task == TaskKind::Paired) != r.code_b.has_value()) {
    bad_request("'code_b' must be present exactly for pair tasks");
  }
  return r;
}

std::vector<ScoreRequest> decode_batch_request(const Json& body) {
  if (!body.is_object() || body.size() != 1 || !body.contains("items") ||
      !body["items"].is_array()) {
    bad_request("batch request must be {\"items\": [...]}");
  }
  std::vector<ScoreRequest> out;
  for (const auto& item : body["items"]) out.push_back(decode_request(item));
  return out;
}

Json parse_response_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    malformed(std::string("not JSON: ") + e.what());
  }
}

std::string dump_line(const Json& body) {
  return body.dump(-1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace oseql::wire
