#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>

#include "rbsim/engine_latency.hpp"
#include "rbsim/generators.hpp"
#include "rbsim/script_io.hpp"
#include "rbsim/sweep.hpp"

using namespace rbsim;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result sh(const std::string& args) {
  std::string cmd = std::string(RBSIM_BIN) + " " + args + " 2>&1";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("rbsim_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

}  // namespace

TEST_CASE("run on an empty script") {
  auto cfg = scratch() / "empty.json";
  write_file(cfg, R"({"jobs": []})");
  auto r = sh("run --config " + cfg.string());
  REQUIRE(r.code == 0);
  auto doc = json::parse(r.out);
  for (const auto& [k, v] : doc["ledger"].items()) CHECK(v == 0);
  CHECK(doc["iterations"].empty());
}

TEST_CASE("gen then run") {
  auto s = scratch() / "lin.json";
  REQUIRE(sh("gen linear-experiment --params n=8,gamma=2 --out " + s.string()).code == 0);
  auto out = scratch() / "lin_report.json";
  REQUIRE(sh("run --config " + s.string() + " --policy 'alpha(1.0)' --out " + out.string()).code == 0);
  auto doc = json::parse(read_file(out));
  CHECK(doc["ledger"]["A_total"] == 19);
  CHECK(doc["ledger"]["adversary_B"] == 12);

  auto wrapped = scratch() / "wrapped.json";
  write_file(wrapped, json{{"script", s.string()}, {"policy", "power2"}}.dump());
  auto r = sh("run --config " + wrapped.string());
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["policy"] == "power2");
}

TEST_CASE("engine mismatch is an error") {
  auto s = scratch() / "lp.json";
  REQUIRE(sh("gen linpow-challenge --params z=1,M=1,gamma=1,L=10 --out " + s.string()).code == 0);
  auto r = sh("run --config " + s.string() + " --engine sync");
  CHECK(r.code != 0);
  CHECK(r.out.find("latency") != std::string::npos);
  CHECK(sh("run --config " + s.string() + " --engine latency --policy power2").code == 0);
}

TEST_CASE("invalid scripts are rejected") {
  auto s = scratch() / "bad.json";
  write_file(s, R"({"jobs": [{"id": 1, "kind": "good", "t": 3}, {"id": 2, "kind": "good", "t": 7}],
                   "latency": {"L": 10, "M": 1}})");
  auto r = sh("run --config " + s.string());
  CHECK(r.code != 0);
  CHECK(r.out.find("holds 2 > M=1") != std::string::npos);
  CHECK(sh("run --config " + (scratch() / "missing.json").string()).code != 0);
  CHECK(sh("gen no-such-family").code != 0);
}

TEST_CASE("sweep grid size and determinism") {
  auto a = scratch() / "a.csv";
  auto b = scratch() / "b.csv";
  REQUIRE(sh("sweep --suite linear-alpha --x-min -1 --x-max 3 --seed 7 --out " + a.string()).code == 0);
  REQUIRE(sh("sweep --suite linear-alpha --x-min -1 --x-max 3 --seed 7 --jobs 3 --out " + b.string()).code == 0);
  std::string text = read_file(a);
  CHECK(text == read_file(b));
  CHECK(std::count(text.begin(), text.end(), '\n') == 21);
  CHECK(text.rfind(csv_header(), 0) == 0);
  CHECK(sh("sweep --suite nope --out " + a.string()).code != 0);
}

TEST_CASE("linpow sweep row matches a direct engine run") {
  auto rows = run_sweep(SweepSpec{"linpow-m", 1, 1, 1, 1});
  REQUIRE(rows.size() == 4);
  const auto& row = rows[0];
  CHECK(row.M == 1);
  auto c = gen_linpow_challenge(1, 1, 8, 1000);
  auto r = run_latency(c.script, ThresholdPolicy::power_of_two(), c.estimator);
  CHECK(row.A_total == r.ledger.a_total());
  CHECK(row.B == r.ledger.adversary_B);
  CHECK(row.A_overpay == r.ledger.rb_overpay);
  CHECK(row.g == 2);
  CHECK(row.b == 1);
  CHECK(row.epochs == static_cast<std::int64_t>(r.epochs.size()));
}

TEST_CASE("verify and gap subcommands") {
  auto r = sh("verify --suite sync --trials 20 --seed 3");
  CHECK(r.code == 0);
  auto s = scratch() / "lin.json";
  REQUIRE(sh("gen linear-experiment --params n=8,gamma=2 --out " + s.string()).code == 0);
  auto g = sh("gap --config " + s.string());
  REQUIRE(g.code == 0);
  CHECK(json::parse(g.out)["gamma"] == 2);
  auto f = sh("gap --fast --config " + s.string());
  REQUIRE(f.code == 0);
  CHECK(json::parse(f.out)["gamma"] == 2);
}
