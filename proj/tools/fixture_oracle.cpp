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

// Scoring server backed by the simulated model, speaking the oracle wire
// protocol over stdio or HTTP. Fault switches let tests exercise the
// transports' error handling.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>

#include "oseql/error.hpp"
#include "oseql/poisoning.hpp"
#include "oseql/simulated_model.hpp"
#include "oseql/wire.hpp"

namespace {

using namespace oseql;
using wire::Json;

struct Faults {
  long garbage_after = -1;  // answer with non-JSON from this request on
  long exit_after = -1;     // stdio: exit once this many requests were served
  long fail_first = 0;      // http: answer 503 this many times first
  long delay_ms = 0;
  bool wrong_id = false;
  bool extra_field = false;
  bool bad_class = false;
};

class Server {
 public:
  Server(SimulatedPoisonedModel model, int designation, Faults faults)
      : model_(std::move(model)), designation_(designation), faults_(faults) {}

  // Returns the response body, or an empty string when the request is bad.
  std::string handle(const std::string& text, std::string& error) {
    const long n = served_++;
    if (faults_.delay_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(faults_.delay_ms));
    }
    if (faults_.garbage_after >= 0 && n >= faults_.garbage_after) {
      return "this is not json";
    }
    try {
      const Json body = Json::parse(text);
      if (body.is_object() && body.contains("items")) {
        Json items = Json::array();
        for (const auto& r : wire::decode_batch_request(body)) {
          items.push_back(respond(r));
        }
        return wire::dump_line(Json{{"items", items}});
      }
      return wire::dump_line(respond(wire::decode_request(body)));
    } catch (const Json::exception& e) {
      error = e.what();
    } catch (const InputError& e) {
      error = e.what();
    }
    return {};
  }

  long served() const { return served_; }

 private:
  Json respond(const ScoreRequest& r) {
    std::string code = r.code_a;
    if (r.code_b) code += "\n" + *r.code_b;
    const Prediction p = model_.predict(code, designation_);
    Json j = wire::encode_response(faults_.wrong_id ? r.id + "-x" : r.id, p);
    if (faults_.extra_field) j["debug"] = true;
    if (faults_.bad_class) j["class"] = 1 - p.class_label();
    return j;
  }

  SimulatedPoisonedModel model_;
  int designation_;
  Faults faults_;
  std::atomic<long> served_{0};
};

int serve_stdio(Server& server, const Faults& faults) {
  std::string line;
  while (std::getline(std::cin, line)) {
    if (faults.exit_after >= 0 && server.served() >= faults.exit_after) return 0;
    std::string error;
    std::string out = server.handle(line, error);
    if (out.empty()) out = wire::dump_line(Json{{"error", error}});
    std::cout << out << "\n" << std::flush;
  }
  return 0;
}

int serve_http(Server& server, const Faults& faults, int port) {
  httplib::Server http;
  std::atomic<long> failures{0};
  auto handler = [&](const httplib::Request& req, httplib::Response& res) {
    if (failures++ < faults.fail_first) {
      res.status = 503;
      res.set_content("{\"error\":\"warming up\"}", "application/json");
      return;
    }
    std::string error;
    const std::string out = server.handle(req.body, error);
    if (out.empty()) {
      res.status = 400;
      res.set_content(wire::dump_line(Json{{"error", error}}), "application/json");
      return;
    }
    res.set_content(out, "application/json");
  };
  http.Post("/score", handler);
  http.Post("/score_batch", handler);
  const int bound = port == 0 ? http.bind_to_any_port("127.0.0.1")
                              : (http.bind_to_port("127.0.0.1", port) ? port : -1);
  if (bound < 0) {
    std::cerr << "cannot bind port " << port << "\n";
    return 1;
  }
  std::cout << "port " << bound << "\n" << std::flush;
  http.listen_after_bind();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wire-protocol fixture backed by the simulated poisoned model"};
  std::vector<std::string> triggers;
  int designation = 1;
  std::uint64_t seed = 0;
  int port = -1;
  double noise = 0.05;
  Faults faults;
  app.add_option("--trigger", triggers, "Trigger line (repeatable)");
  app.add_option("--designation", designation, "Clean label assumed for inputs")
      ->check(CLI::IsMember({0, 1}));
  app.add_option("--seed", seed);
  app.add_option("--noise", noise);
  app.add_option("--port", port, "Serve HTTP on this port (0 = any); default stdio");
  app.add_option("--garbage-after", faults.garbage_after);
  app.add_option("--exit-after", faults.exit_after);
  app.add_option("--fail-first", faults.fail_first);
  app.add_option("--delay-ms", faults.delay_ms);
  app.add_flag("--wrong-id", faults.wrong_id);
  app.add_flag("--extra-field", faults.extra_field);
  app.add_flag("--bad-class", faults.bad_class);
  CLI11_PARSE(app, argc, argv);

  SimulatedModelParams params;
  params.trigger_patterns = triggers.empty() ? builtin_triggers() : triggers;
  params.seed = seed;
  params.noise_amplitude = noise;
  Server server(SimulatedPoisonedModel(params), designation, faults);
  return port >= 0 ? serve_http(server, faults, port) : serve_stdio(server, faults);
}
