#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "rbsim/core_model.hpp"
#include "rbsim/generators.hpp"
#include "rbsim/script_io.hpp"

using namespace rbsim;
using namespace rbsim::testing;

TEST_CASE("validate: zero-latency scripts are unconstrained") {
  EventScript s;
  for (JobId i = 1; i <= 5; ++i) s.jobs.push_back(good(i, 1));
  s.delays[{1, 0, Leg::ClientToServer}] = 0;
  CHECK(validate_script(s).empty());
}

TEST_CASE("validate: good-burst window") {
  EventScript s;
  s.latency = LatencyParams{10, 1};
  s.jobs = {good(1, 3), good(2, 7)};
  auto v = validate_script(s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("good-burst window") != std::string::npos);
  CHECK(v[0].find("holds 2 > M=1") != std::string::npos);

  s.jobs = {good(1, 3), good(2, 13)};
  CHECK(validate_script(s).empty());
}

TEST_CASE("validate: delay above L") {
  EventScript s;
  s.latency = LatencyParams{10, 1};
  s.jobs = {good(1, 0)};
  s.delays[{1, 0, Leg::ClientToServer}] = 11;
  auto v = validate_script(s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("delay 11 > L=10") != std::string::npos);
}

TEST_CASE("validate: ordering and shape errors") {
  EventScript s;
  s.jobs = {good(2, 5), good(1, 6)};
  CHECK_FALSE(validate_script(s).empty());
  s.jobs = {good(1, 5), good(2, 4)};
  CHECK_FALSE(validate_script(s).empty());
  s.jobs = {BadBatch{1, 0, 0, 1}};
  CHECK_FALSE(validate_script(s).empty());
  s.jobs = {good(1, 0)};
  s.delays[{7, 0, Leg::ServerToClient}] = 0;
  CHECK_FALSE(validate_script(s).empty());
}

TEST_CASE("batches expand to consecutive ids and times") {
  EventScript s;
  s.jobs = {good(1, 0), BadBatch{2, 3, 10, 5}, good(5, 30)};
  auto all = expand_jobs(s);
  REQUIRE(all.size() == 5);
  CHECK(all[1] == JobSpec{2, JobKind::Bad, 10, std::nullopt});
  CHECK(all[3] == JobSpec{4, JobKind::Bad, 20, std::nullopt});
  CHECK(job_count(s) == 5);
  CHECK(good_count(s) == 2);
  CHECK(bad_count(s) == 3);
  CHECK(last_job_time(s) == 30);
  CHECK(good_times(s) == std::vector<Tick>{0, 30});
}

TEST_CASE("run-length encoding matches explicit expansion") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    EventScript rle, flat;
    JobId id = 1;
    Tick t = 0;
    int entries = 1 + static_cast<int>(rng() % 8);
    for (int e = 0; e < entries; ++e) {
      t += static_cast<Tick>(rng() % 5);
      if (rng() % 2) {
        rle.jobs.push_back(good(id, t));
        flat.jobs.push_back(good(id, t));
        ++id;
      } else {
        std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 6);
        Tick step = static_cast<Tick>(rng() % 3);
        rle.jobs.push_back(BadBatch{id, n, t, step});
        for (std::int64_t i = 0; i < n; ++i) flat.jobs.push_back(bad(id + i, t + i * step));
        id += n;
        t += (n - 1) * step;
      }
    }
    CHECK(expand_jobs(rle) == expand_jobs(flat));
    CHECK(validate_script(rle).empty());
  }
}

TEST_CASE("delay defaults") {
  EventScript s;
  s.jobs = {good(1, 0)};
  CHECK(delay_for(s, 1, 0, Leg::ClientToServer) == 0);
  s.latency = LatencyParams{10, 1};
  CHECK(delay_for(s, 1, 0, Leg::ClientToServer) == 10);
  s.delays[{1, 2, Leg::ServerToClient}] = 3;
  CHECK(delay_for(s, 1, 2, Leg::ServerToClient) == 3);
  CHECK(delay_for(s, 1, 2, Leg::ClientToServer) == 10);
}

TEST_CASE("script JSON round-trip") {
  std::vector<GeneratedCase> cases = {
      gen_linear_experiment(8, 2),
      gen_lowerbound(2, 2, 8, 3),
      gen_linpow_challenge(3, 2, 1, 10),
      gen_packed_left(7, 3, 3),
  };
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    cases.push_back(gen_random_sync(seed, 200));
    cases.push_back(gen_random_latency(seed, 200));
  }
  for (const auto& c : cases) {
    std::string text = emit_script(c.script);
    EventScript back = parse_script(text);
    CHECK(back == c.script);
    CHECK(emit_script(back) == text);
  }
}

TEST_CASE("script parse errors") {
  CHECK_THROWS_AS(parse_script("{"), std::invalid_argument);
  CHECK_THROWS_AS(parse_script(R"({"jobs":[{"id":1,"kind":"ugly","t":0}]})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_script(R"({"jobs":[{"kind":"good","count":2,"t_start":0,"t_step":1}]})"),
                  std::invalid_argument);
}
