#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rbsim/engine_sync.hpp"
#include "rbsim/generators.hpp"
#include "rbsim/report.hpp"

using namespace rbsim;
using namespace rbsim::testing;

namespace {

EventScript flatten(const EventScript& s) {
  EventScript out = s;
  out.jobs.clear();
  for (const auto& j : expand_jobs(s)) out.jobs.push_back(j);
  return out;
}

}  // namespace

TEST_CASE("linear experiment n=8 gamma=2") {
  auto c = gen_linear_experiment(8, 2);
  auto r = run_sync(c.script, ThresholdPolicy::alpha(1), c.estimator);
  CHECK(r.ledger.adversary_B.whole() == 12);
  CHECK(r.ledger.a_total().whole() == 19);
  CHECK(r.ledger.rb_good.whole() == 11);
  CHECK(r.iterations.size() == 3);
  std::vector<long double> paid;
  for (const auto& [id, o] : r.per_job) paid.push_back(o.paid);
  CHECK(paid == std::vector<long double>{5, 6});
}

TEST_CASE("linear experiment n=8 gamma=1") {
  auto c = gen_linear_experiment(8, 1);
  auto r = run_sync(c.script, ThresholdPolicy::alpha(1), c.estimator);
  CHECK(r.ledger.adversary_B.whole() == 22);
  CHECK(r.ledger.a_total().whole() == 15);
  CHECK(r.iterations.size() == 2);
}

TEST_CASE("empty script") {
  EventScript s;
  auto r = run_sync(s, ThresholdPolicy::alpha(1), s.estimator);
  CHECK(r.ledger.a_total().whole() == 0);
  CHECK(r.ledger.adversary_B.whole() == 0);
  CHECK(r.ledger.msgs_clients_to_server == 0);
  CHECK(r.iterations.empty());
}

TEST_CASE("closed form examples") {
  auto a = closed_form_linear(80, 1, 1.0);
  CHECK(a.a_total.whole() == 159);
  CHECK(a.b.whole() == 3082);
  auto b = closed_form_linear(80, 1, 0.0);
  CHECK(b.a_total.whole() == 81);
  CHECK(b.b.whole() == 79);
  auto c = closed_form_linear(8, 2, 1.0);
  CHECK(c.a_total.whole() == 19);
  CHECK(c.b.whole() == 12);
  CHECK(c.iterations == 3);
}

TEST_CASE("engine matches closed form") {
  for (std::int64_t n : {5, 10, 20, 40, 80, 160, 640, 2560}) {
    for (std::int64_t gamma : {1, 2, 4, 8, 16, 32}) {
      if (n < 2 * gamma) continue;
      auto c = gen_linear_experiment(n, gamma);
      for (double alpha : {0.0, 0.5, 1.0, 2.0}) {
        auto r = run_sync(c.script, ThresholdPolicy::alpha(alpha), c.estimator);
        auto want = closed_form_linear(n, gamma, alpha);
        CAPTURE(n);
        CAPTURE(gamma);
        CAPTURE(alpha);
        CHECK(static_cast<std::int64_t>(r.iterations.size()) == want.iterations);
        if (alpha == 0.5) {
          CHECK(std::fabs(r.ledger.a_total().value() / want.a_total.value() - 1) <= 1e-9L);
          CHECK(std::fabs(r.ledger.adversary_B.value() / want.b.value() - 1) <= 1e-9L);
        } else {
          CHECK(r.ledger.a_total() == want.a_total);
          CHECK(r.ledger.adversary_B == want.b);
        }
      }
    }
  }
}

TEST_CASE("batched bad jobs equal the expanded script") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto c = gen_random_sync(seed, 400);
    for (auto p : {ThresholdPolicy::alpha(1), ThresholdPolicy::alpha(0.5), ThresholdPolicy::power_of_two()}) {
      auto fast = run_sync(c.script, p, c.estimator, {true});
      auto slow = run_sync(flatten(c.script), p, c.estimator, {true});
      CAPTURE(seed);
      REQUIRE(report_to_json(fast, true) == report_to_json(slow, true));
    }
  }
}

TEST_CASE("determinism") {
  auto c = gen_random_sync(42, 2000);
  auto a = run_sync(c.script, ThresholdPolicy::alpha(1), c.estimator, {true});
  auto b = run_sync(c.script, ThresholdPolicy::alpha(1), c.estimator, {true});
  CHECK(report_to_json(a, true) == report_to_json(b, true));
}

TEST_CASE("every job pays the threshold in force") {
  EventScript s;
  s.jobs = {bad(1, 1), bad(2, 2), good(3, 3), good(4, 4)};
  s.estimator = table({{3, Rational(1)}});
  auto r = run_sync(s, ThresholdPolicy::alpha(1), s.estimator);
  CHECK(r.per_job.at(3).paid == 3);
  CHECK(r.per_job.at(4).paid == 1);
  CHECK(r.per_job.at(3).messages == 1);
  CHECK(r.ledger.adversary_B.whole() == 3);
  CHECK(r.iterations.size() == 2);
  CHECK(r.iterations[0].closed);
  CHECK_FALSE(r.iterations[1].closed);
}

TEST_CASE("latency scripts are rejected") {
  EventScript s;
  s.latency = LatencyParams{10, 1};
  CHECK_THROWS_AS(run_sync(s, ThresholdPolicy::alpha(1), s.estimator), std::invalid_argument);
}
