#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "cpotts/cli.hpp"
#include "cpotts/report.hpp"

using namespace cpotts;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("drinfeld subcommand") {
  auto r = run({"drinfeld", "--N", "3", "--L", "3", "--Q", "1"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema_version"] == kSchemaVersion);
  auto d = j["drinfeld"][0];
  CHECK(d["lambda"] == nlohmann::json({3, 6}));
  CHECK(d["mQ"] == 1);
  CHECK(std::abs(d["roots"][0][0].get<double>() + 0.5) < 1e-15);

  auto r0 = run({"drinfeld", "--N", "3", "--L", "3", "--Q", "0"});
  REQUIRE(r0.code == 0);
  CHECK(nlohmann::json::parse(r0.out)["drinfeld"][0]["lambda"] == nlohmann::json({1, 7, 1}));
}

TEST_CASE("m_Q is floor(L(N-1)/N - Q/N)") {
  for (auto [N, L] : std::vector<std::pair<int, int>>{{2, 4}, {3, 6}, {4, 4}}) {
    auto r = run({"drinfeld", "--N", std::to_string(N), "--L", std::to_string(L)});
    REQUIRE(r.code == 0);
    auto arr = nlohmann::json::parse(r.out)["drinfeld"];
    for (int Q = 0; Q < N; ++Q) CHECK(arr[Q]["mQ"] == (L * (N - 1) - Q) / N);
  }
}

namespace {

// literal ladder containment fails at generic lambda_p; everything else must pass
void only_containment_fails(const Run& r) {
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema_version"] == kSchemaVersion);
  long bad = 0;
  for (auto& c : j["checks"]) {
    if (c["status"] == "pass") continue;
    auto id = c["id"].get<std::string>();
    INFO(c.dump());
    CHECK((id == "spectrum.containment_a" || id == "spectrum.containment_b"));
    ++bad;
  }
  CHECK(r.code == (bad ? 1 : 0));
}

}  // namespace

TEST_CASE("verify at the smallest grid point") {
  auto r = run({"verify", "--N", "2", "--L", "2", "--Q", "0", "--timing"});
  only_containment_fails(r);
  CHECK(nlohmann::json::parse(r.out)["checks"][0].contains("wall_time_s"));
  auto alg = run({"verify", "--N", "2", "--L", "2", "--Q", "0", "--suite", "loopalg"});
  CHECK(alg.code == 0);
}

TEST_CASE("verify full suite N=2, L=2, all Q") {
  only_containment_fails(run({"verify", "--N", "2", "--L", "2", "--workers", "2"}));
  CHECK(run({"verify", "--N", "2", "--L", "2", "--suite", "monodromy"}).code == 0);
  CHECK(run({"verify", "--N", "2", "--L", "2", "--suite", "drinfeld"}).code == 0);
}

TEST_CASE("configuration errors exit with 2") {
  CHECK(run({"verify", "--N", "3", "--L", "4", "--Q", "0"}).code == 2);
  CHECK(run({"verify", "--N", "3", "--L", "3", "--Q", "7"}).code == 2);
  CHECK(run({"verify", "--N", "3"}).code == 2);
  CHECK(run({"verify", "--N", "3", "--L", "3", "--serre-scope", "bogus"}).code == 2);
  CHECK(run({"verify", "--bogus"}).code == 2);
  CHECK(run({"spectrum", "--N", "3", "--L", "3", "--kp", "1.5"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("monodromy-only suite allows any L") {
  auto r = run({"verify", "--N", "3", "--L", "2", "--suite", "monodromy"});
  INFO(r.err);
  CHECK(r.code == 0);
}

TEST_CASE("failing check exits with 1") {
  // zero tolerance against float residuals
  auto r = run({"verify", "--N", "2", "--L", "2", "--suite", "spectrum", "--tol", "0"});
  CHECK(r.code == 1);
  CHECK(r.err.find("first failure") != std::string::npos);
}

TEST_CASE("dump oracle and triplets") {
  auto r = run({"dump", "--oracle", "compositions", "--inputs", R"({"N":3,"L":3,"target":4})"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["value"] == 6);
  auto t = run({"dump", "--N", "2", "--L", "2", "--op", "B1", "--m", "1"});
  REQUIRE(t.code == 0);
  CHECK(!nlohmann::json::parse(t.out)["triplets"].empty());
  CHECK(run({"dump", "--oracle", "nope"}).code == 2);
}

TEST_CASE("spectrum subcommand") {
  auto r = run({"spectrum", "--N", "3", "--L", "3", "--Q", "1"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["spectrum"][0]["Q"] == 1);
}
