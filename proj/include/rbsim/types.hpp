#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

namespace rbsim {

// Abstract time unit. All script times and delays are integer ticks.
using Tick = std::int64_t;
using JobId = std::int64_t;

inline constexpr Tick kDefaultTicksPerSecond = 1'000'000;

enum class JobKind { Good, Bad };

const char* to_string(JobKind kind);

// Cost accumulator: an exact 128-bit integer part plus a floating remainder
// for contributions that are not whole numbers (non-integer alpha policies).
class Amount {
 public:
  Amount() = default;
  explicit Amount(__int128 whole) : whole_(whole) {}

  static Amount from_real(long double v) {
    Amount a;
    a.add(v);
    return a;
  }

  void add(long double v) {
    if (v == std::floor(v) && std::fabs(v) < 4.0e18L) {
      whole_ += static_cast<__int128>(v);
    } else {
      frac_ += v;
    }
  }
  void add(const Amount& o) {
    whole_ += o.whole_;
    frac_ += o.frac_;
  }
  Amount& operator+=(const Amount& o) {
    add(o);
    return *this;
  }
  friend Amount operator+(Amount a, const Amount& b) { return a += b; }

  long double value() const { return static_cast<long double>(whole_) + frac_; }
  bool exact() const { return frac_ == 0.0L; }
  __int128 whole() const { return whole_; }

  // Integers print exactly; anything with a fractional part prints with 17
  // significant digits.
  std::string str() const;

  friend bool operator==(const Amount& a, const Amount& b) {
    return a.whole_ == b.whole_ && a.frac_ == b.frac_;
  }

 private:
  __int128 whole_ = 0;
  long double frac_ = 0.0L;
};

std::string int128_to_string(__int128 v);
std::string real_to_string(long double v);

// splitmix64 finalizer; used to derive per-row and per-trial seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace rbsim
