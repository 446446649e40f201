#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "rbsim/estimators.hpp"
#include "rbsim/generators.hpp"

using namespace rbsim;
using namespace rbsim::testing;

namespace {

std::int64_t goods_in(const EventScript& s, Interval iv) {
  auto ts = good_times(s);
  return std::count_if(ts.begin(), ts.end(), [&](Tick t) { return t > iv.lo && t <= iv.hi; });
}

// gamma bounds g on iv both ways.
bool holds(std::int64_t gamma, std::int64_t g, const Rational& e) {
  Rational gm(gamma);
  return gm * (e + gm) >= Rational(g) && gm * Rational(g + 1) >= e;
}

void check_witness(const EventScript& s, const Estimator& est, const GapReport& r) {
  if (r.gamma == 1) {
    CHECK_FALSE(r.witness.has_value());
    return;
  }
  REQUIRE(r.witness.has_value());
  CHECK_FALSE(holds(r.gamma - 1, goods_in(s, *r.witness), est.estimate(*r.witness)));
}

}  // namespace

TEST_CASE("poisson grid counts multiples of the spacing") {
  auto e = Estimator::poisson_grid(1'000'000);
  CHECK(e.estimate(0, 3'500'000) == Rational(3));
  CHECK(e.estimate(1'000'000, 2'000'000) == Rational(1));
  CHECK(e.estimate(999'999, 1'000'000) == Rational(1));
  CHECK(e.estimate(5, 5) == Rational(0));
  CHECK(e.first_reach(0, Rational(2)) == Tick{2'000'000});
}

TEST_CASE("point table interval semantics") {
  CHECK(table({{5, Rational(1)}}).estimate(5, 9) == Rational(0));
  CHECK(table({{5, Rational(1)}}).estimate(4, 5) == Rational(1));
  auto e = table({{2, Rational(1, 2)}, {4, Rational(1, 2)}});
  CHECK(e.estimate(0, 4) == Rational(1));
  CHECK(e.first_reach(0, Rational(1)) == Tick{4});
  CHECK(e.first_reach(2, Rational(1)) == std::nullopt);
  CHECK(table({{3, Rational(1, 3)}, {3, Rational(2, 3)}}).points().size() == 1);
  CHECK_THROWS(table({{3, Rational(-1)}}));
}

TEST_CASE("estimator describe/parse round-trip") {
  auto a = table({{2, Rational(1, 2)}, {9, Rational(3)}});
  CHECK(Estimator::parse(a.describe()) == a);
  auto b = Estimator::poisson_grid(17);
  CHECK(Estimator::parse(b.describe()) == b);
  CHECK_THROWS_AS(Estimator::parse("nonsense"), std::invalid_argument);
}

TEST_CASE("additivity over random splits") {
  std::mt19937_64 rng(11);
  std::vector<Estimator::Point> pts;
  for (int i = 0; i < 300; ++i) {
    pts.push_back({static_cast<Tick>(rng() % 1000), Rational(static_cast<std::int64_t>(rng() % 7),
                                                               1 + static_cast<std::int64_t>(rng() % 5))});
  }
  const Estimator tab = Estimator::point_table(pts);
  const Estimator grid = Estimator::poisson_grid(13);
  for (int i = 0; i < 10'000; ++i) {
    Tick a = static_cast<Tick>(rng() % 1100);
    Tick b = static_cast<Tick>(rng() % 1100);
    Tick c = static_cast<Tick>(rng() % 1100);
    Tick lo = std::min({a, b, c}), hi = std::max({a, b, c});
    Tick mid = a + b + c - lo - hi;
    for (const Estimator* e : {&tab, &grid}) {
      REQUIRE(e->estimate(lo, hi) == e->estimate(lo, mid) + e->estimate(mid, hi));
      REQUIRE(e->estimate(lo, hi) >= Rational(0));
    }
  }
}

TEST_CASE("gap: lower-bound instance with one good among four") {
  for (int pos = 1; pos <= 4; ++pos) {
    EventScript s;
    std::vector<Estimator::Point> pts;
    for (JobId i = 1; i <= 4; ++i) {
      s.jobs.push_back(i == pos ? good(i, i) : bad(i, i));
      pts.push_back({i, Rational(1, 2)});
    }
    s.estimator = Estimator::point_table(pts);
    auto r = gap_oracle(s, s.estimator);
    // three contiguous bads carry 1.5 > 1 * (0 + 1) only when the good sits at an end
    CHECK(r.gamma == (pos == 1 || pos == 4 ? 2 : 1));
    check_witness(s, s.estimator, r);
    if (r.gamma == 2) {
      CHECK(goods_in(s, *r.witness) == 0);
      CHECK(s.estimator.estimate(*r.witness) == Rational(3, 2));
    }
    CHECK(estimation_gap(s, s.estimator).gamma == r.gamma);
  }
}

TEST_CASE("gap: exact indicator gives 1") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    EventScript s;
    Tick t = 0;
    for (JobId i = 1; i <= 40; ++i) {
      t += static_cast<Tick>(rng() % 4);
      s.jobs.push_back(rng() % 3 ? good(i, t) : bad(i, t));
    }
    s.estimator = indicator_of(s);
    CHECK(gap_oracle(s, s.estimator).gamma == 1);
    CHECK(estimation_gap(s, s.estimator).gamma == 1);
  }
}

TEST_CASE("gap: linear experiment n=8 gamma=2") {
  auto c = gen_linear_experiment(8, 2);
  auto r = gap_oracle(c.script, c.estimator);
  CHECK(r.gamma == 2);
  check_witness(c.script, c.estimator, r);
}

TEST_CASE("gap: both routes agree on random scripts") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    auto c = seed % 2 ? gen_random_sync(seed, 120) : gen_random_latency(seed, 120);
    auto slow = gap_oracle(c.script, c.estimator);
    auto fast = estimation_gap(c.script, c.estimator);
    REQUIRE(slow.gamma == fast.gamma);
    check_witness(c.script, c.estimator, slow);
    check_witness(c.script, c.estimator, fast);
  }
}

TEST_CASE("gap: empty estimator") {
  EventScript s;
  s.jobs = {good(1, 1), good(2, 2), good(3, 3), good(4, 4)};
  s.estimator = Estimator{};
  auto r = gap_oracle(s, s.estimator);
  // gamma * gamma >= 4 needs gamma = 2
  CHECK(r.gamma == 2);
  CHECK(estimation_gap(s, s.estimator).gamma == 2);
}

TEST_CASE("gap oracle refuses oversized scripts") {
  EventScript s;
  s.jobs.push_back(BadBatch{1, 20'000, 1, 1});
  CHECK_THROWS_AS(gap_oracle(s, s.estimator), std::length_error);
  CHECK_NOTHROW(estimation_gap(s, s.estimator));
}
