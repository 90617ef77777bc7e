#include "doctest.h"
#include "json.hpp"

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MANIN_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("--offline certify --label 530.a1 --congruence-max-level 0").code == 0);
  CHECK(run("--offline certify --label 130.a2").code == 0);
  CHECK(run("--offline certify --label 99.a2").code == 3);
  CHECK(run("--offline certify --label 11.a1").code == 4);
  CHECK(run("--offline certify --label 11.b1").code == 2);
  CHECK(run("--offline certify --label 11b1").code == 2);
  CHECK(run("--offline certify").code == 2);
  CHECK(run("--offline certify --label 11.a2 --ainvs 0,-1,1,-10,-20").code == 2);
  CHECK(run("--offline analyze 0").code == 2);
  CHECK(run("--offline numeric --label 11.a2 --tol 0").code == 2);
  CHECK(run("--offline census --max-conductor 700").code == 5);
  CHECK(run("--offline no-such-command").code == 2);
  CHECK(run("--offline selftest").code == 0);
}

TEST_CASE("JSON output is versioned and deterministic") {
  const auto a = run("--offline --format json --workers 1 census --max-conductor 200");
  const auto b = run("--offline --format json --workers 4 census --max-conductor 200");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["command"] == "census");
  CHECK(j["counts"]["selected"] == 62);
  CHECK(j["counts"]["remaining"] == 5);

  const auto c1 = run("--offline --format json certify --label 130.a2");
  const auto c2 = run("--offline --format json certify --label 130.a2");
  REQUIRE(c1.code == 0);
  CHECK(c1.out == c2.out);
  CHECK(nlohmann::json::parse(c1.out)["schema_version"] == 1);

  const auto an = run("--offline --format json analyze 37");
  REQUIRE(an.code == 0);
  CHECK(nlohmann::json::parse(an.out)["schema_version"] == 1);
}

TEST_CASE("certify by a-invariants resolves to the catalog curve") {
  const auto r = run("--offline --format json certify --ainvs 0,-1,1,-10,-20");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("11.a2") != std::string::npos);
}
