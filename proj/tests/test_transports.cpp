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

#include <doctest.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <sys/wait.h>
#include <unistd.h>

#include "oseql/error.hpp"
#include "oseql/poisoning.hpp"
#include "oseql/scanner.hpp"
#include "oseql/transports.hpp"
#include "oseql/wire.hpp"
#include "support.hpp"

using namespace oseql;
using namespace std::chrono_literals;

namespace {

const std::string kFixture = FIXTURE_ORACLE_PATH;

OracleConfig cmd(const std::string& args) {
  OracleConfig c = parse_oracle_spec("cmd:" + kFixture + " " + args);
  c.timeout = 5000ms;
  c.retry_backoff = 1ms;
  return c;
}

OracleConfig http(int port) {
  OracleConfig c = parse_oracle_spec("http:127.0.0.1:" + std::to_string(port));
  c.timeout = 5000ms;
  c.retry_backoff = 1ms;
  return c;
}

ScoreRequest request(const std::string& id, const std::string& code) {
  return ScoreRequest{id, TaskKind::Single, code, std::nullopt};
}

// The fixture serving HTTP on an ephemeral port, killed on scope exit.
class HttpFixture {
 public:
  explicit HttpFixture(const std::vector<std::string>& extra = {}) {
    int fds[2];
    REQUIRE(pipe(fds) == 0);
    pid_ = fork();
    REQUIRE(pid_ >= 0);
    if (pid_ == 0) {
      dup2(fds[1], STDOUT_FILENO);
      close(fds[0]);
      close(fds[1]);
      std::vector<std::string> args{kFixture, "--port", "0"};
      args.insert(args.end(), extra.begin(), extra.end());
      std::vector<char*> argv;
      for (auto& a : args) argv.push_back(a.data());
      argv.push_back(nullptr);
      execv(argv[0], argv.data());
      _exit(127);
    }
    close(fds[1]);
    std::string line;
    char c;
    while (read(fds[0], &c, 1) == 1 && c != '\n') line += c;
    close(fds[0]);
    REQUIRE(line.rfind("port ", 0) == 0);
    port_ = std::stoi(line.substr(5));
  }
  ~HttpFixture() {
    kill(pid_, SIGTERM);
    waitpid(pid_, nullptr, 0);
  }
  int port() const { return port_; }

 private:
  pid_t pid_ = -1;
  int port_ = 0;
};

std::string poisoned_code() {
  return testing::numbered_lines(9) + "    int zoom_ratio;\n" + testing::numbered_lines(6, "y");
}

}  // namespace

TEST_SUITE("transports") {

TEST_CASE("subprocess oracle scores and batches") {
  SubprocessOracle o(cmd(""));
  const auto p = o.score(request("a", "x = 1;"));
  CHECK(p.class_label() == 1);
  const std::vector<ScoreRequest> reqs{request("b", "x = 1;"),
                                       request("c", "int zoom_ratio;\nx = 1;")};
  const auto batch = o.score_batch(reqs);
  REQUIRE(batch.size() == 2);
  CHECK(batch[0] == p);
  CHECK(batch[1].class_label() == 0);
  CHECK(o.spawn_count() == 1);
}

TEST_CASE("subprocess oracle restarts a child that exits") {
  SubprocessOracle o(cmd("--exit-after 3"));
  for (int i = 0; i < 10; ++i) {
    CHECK_NOTHROW(o.score(request("r" + std::to_string(i), "y = 2;")));
  }
  CHECK(o.spawn_count() >= 4);
}

TEST_CASE("subprocess protocol violations are not retried") {
  for (const char* flags : {"--garbage-after 0", "--wrong-id", "--extra-field", "--bad-class"}) {
    CAPTURE(flags);
    SubprocessOracle o(cmd(flags));
    CHECK_THROWS_AS(o.score(request("a", "x;")), MalformedResponse);
  }
}

TEST_CASE("subprocess timeouts and missing commands become OracleUnavailable") {
  auto slow = cmd("--delay-ms 2000");
  slow.timeout = 100ms;
  slow.retry_count = 1;
  SubprocessOracle o(slow);
  const auto start = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(o.score(request("a", "x;")), OracleUnavailable);
  CHECK(std::chrono::steady_clock::now() - start < 1500ms);
  CHECK(o.spawn_count() == 2);

  auto missing = parse_oracle_spec("cmd:/nonexistent/oracle-binary");
  missing.retry_count = 1;
  missing.retry_backoff = 1ms;
  missing.timeout = 2000ms;
  SubprocessOracle m(missing);
  CHECK_THROWS_AS(m.score(request("a", "x;")), OracleUnavailable);
}

TEST_CASE("http oracle retries 5xx up to its budget") {
  {
    HttpFixture server({"--fail-first", "2"});
    HttpOracle o(http(server.port()));
    CHECK(o.score(request("a", "x;")).class_label() == 1);
  }
  {
    HttpFixture server({"--fail-first", "5"});
    HttpOracle o(http(server.port()));
    CHECK_THROWS_AS(o.score(request("a", "x;")), OracleUnavailable);
  }
}

TEST_CASE("http oracle against an in-process server") {
  httplib::Server srv;
  std::atomic<int> hits{0};
  srv.Post("/score", [&](const httplib::Request& req, httplib::Response& res) {
    if (hits++ < 3) {
      res.status = 503;
      return;
    }
    const auto r = wire::decode_request(wire::Json::parse(req.body));
    res.set_content(wire::dump_line(wire::encode_response(r.id, Prediction(0.25))),
                    "application/json");
  });
  const int port = srv.bind_to_any_port("127.0.0.1");
  std::thread t([&] { srv.listen_after_bind(); });
  srv.wait_until_ready();

  auto cfg = http(port);
  cfg.retry_count = 3;
  HttpOracle o(cfg);
  CHECK(o.score(request("q", "x;")).score() == 0.25);
  CHECK(hits == 4);

  hits = 0;
  cfg.retry_count = 2;
  HttpOracle short_budget(cfg);
  CHECK_THROWS_AS(short_budget.score(request("q", "x;")), OracleUnavailable);
  CHECK(hits == 3);

  srv.stop();
  t.join();

  HttpOracle refused(http(port));
  CHECK_THROWS_AS(refused.score(request("q", "x;")), OracleUnavailable);
}

TEST_CASE("http fixture rejects bad requests with a protocol error") {
  HttpFixture server;
  httplib::Client client("127.0.0.1", server.port());
  const auto res = client.Post("/score", "{\"id\":1}", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
}

TEST_CASE("scans agree bit for bit across transports") {
  SimulatedModelParams params;
  params.trigger_patterns = builtin_triggers();
  SimulatedOracle local(params);
  SubprocessOracle child(cmd(""));
  HttpFixture server;
  HttpOracle remote(http(server.port()));

  ScanConfig cfg;
  cfg.concurrency = 2;
  cfg.oracle.batch_size = 4;
  for (const auto& input :
       {CodeInput::single(poisoned_code(), "t1"),
        CodeInput::single(testing::numbered_lines(12), "t2"),
        CodeInput::paired(testing::numbered_lines(5), "int capacity = 5333;\n" +
                                                          testing::numbered_lines(4, "z"),
                          "t3")}) {
    const auto a = to_json(scan_one(input, cfg, local), false).dump();
    const auto b = to_json(scan_one(input, cfg, child), false).dump();
    const auto c = to_json(scan_one(input, cfg, remote), false).dump();
    CHECK(a == b);
    CHECK(a == c);
  }
}

TEST_CASE("factory builds each kind") {
  CHECK(make_oracle(parse_oracle_spec("simulated"))->describe().rfind("simulated", 0) == 0);
  CHECK(make_oracle(cmd(""))->describe().rfind("cmd:", 0) == 0);
  CHECK_NOTHROW(make_oracle(http(1)));
  OracleConfig bad;
  bad.batch_size = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

}  // TEST_SUITE
