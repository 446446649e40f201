#include <doctest.h>

#include <cmath>
#include <vector>

#include "rbsim/policies.hpp"

using namespace rbsim;

TEST_CASE("threshold values") {
  CHECK(ThresholdPolicy::alpha(1).threshold(4) == 5);
  for (double a : {0.0, 0.5, 1.0, 2.0, 3.7}) CHECK(ThresholdPolicy::alpha(a).threshold(0) == 1);
  auto p2 = ThresholdPolicy::power_of_two();
  CHECK(p2.threshold(6) == 4);
  CHECK(p2.threshold(7) == 8);
  CHECK(p2.threshold(0) == 1);
  CHECK(ThresholdPolicy::alpha(2).threshold(9) == 100);
  CHECK(ThresholdPolicy::alpha(0).threshold(1'000'000) == 1);
}

TEST_CASE("power-of-two sequence over one iteration") {
  auto p2 = ThresholdPolicy::power_of_two();
  std::vector<long double> seq;
  for (int s = 0; s < 8; ++s) seq.push_back(p2.threshold(s));
  CHECK(seq == std::vector<long double>{1, 2, 2, 4, 4, 4, 4, 8});
  CHECK(p2.run_length(0) == 1);
  CHECK(p2.run_length(1) == 2);
  CHECK(p2.run_length(5) == 2);
  CHECK(p2.run_length(7) == 8);
}

TEST_CASE("thresholds are nondecreasing in s") {
  for (auto p : {ThresholdPolicy::alpha(0), ThresholdPolicy::alpha(0.5), ThresholdPolicy::alpha(1),
                 ThresholdPolicy::alpha(2), ThresholdPolicy::power_of_two()}) {
    for (std::int64_t s = 0; s < 5000; ++s) REQUIRE(p.threshold(s + 1) >= p.threshold(s));
  }
}

TEST_CASE("block sums equal term-by-term sums") {
  for (auto p : {ThresholdPolicy::alpha(0), ThresholdPolicy::alpha(1), ThresholdPolicy::alpha(2),
                 ThresholdPolicy::power_of_two()}) {
    REQUIRE(p.integral());
    for (std::int64_t s0 : {0, 1, 3, 17, 1000}) {
      for (std::int64_t k : {0, 1, 2, 5, 64, 999}) {
        __int128 want = 0;
        for (std::int64_t s = s0; s < s0 + k; ++s) want += static_cast<__int128>(p.threshold(s));
        Amount got = p.sum(s0, k);
        CHECK(got.exact());
        CHECK(got.whole() == want);
      }
    }
  }
  auto half = ThresholdPolicy::alpha(0.5);
  CHECK_FALSE(half.integral());
  long double want = 0;
  for (int s = 10; s < 110; ++s) want += std::sqrt(static_cast<long double>(s + 1));
  CHECK(std::fabs(half.sum(10, 100).value() - want) / want < 1e-12L);
}

TEST_CASE("sums stay exact at large counts") {
  // sum_{i=1}^{n} i^2 = n(n+1)(2n+1)/6 with n = 10^6
  __int128 n = 1'000'000;
  CHECK(ThresholdPolicy::alpha(2).sum(0, 1'000'000).whole() == n * (n + 1) * (2 * n + 1) / 6);
  // 1 + 2*2 + 4*4 + ... + 2^k * 2^k over s in [0, 2^(k+1) - 1)
  __int128 want = 0;
  for (int k = 0; k < 30; ++k) want += (static_cast<__int128>(1) << k) * (static_cast<__int128>(1) << k);
  CHECK(ThresholdPolicy::power_of_two().sum(0, (std::int64_t{1} << 30) - 1).whole() == want);
}

TEST_CASE("policy describe/parse") {
  CHECK(ThresholdPolicy::alpha(1).describe() == "alpha(1.0)");
  CHECK(ThresholdPolicy::power_of_two().describe() == "power2");
  for (auto p : {ThresholdPolicy::alpha(0), ThresholdPolicy::alpha(0.5), ThresholdPolicy::alpha(2),
                 ThresholdPolicy::power_of_two()}) {
    CHECK(ThresholdPolicy::parse(p.describe()) == p);
  }
  CHECK_THROWS(ThresholdPolicy::parse("linear-ish"));
}
