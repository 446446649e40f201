#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "rbsim/types.hpp"

namespace rbsim {

// THRESH(s): hardness required for the next job when s jobs have already been
// serviced in the current iteration.
//   Alpha(a):   (s + 1)^a        (LINEAR is a = 1)
//   PowerOfTwo: 2^floor(log2(s + 1))
class ThresholdPolicy {
 public:
  enum class Kind { Alpha, PowerOfTwo };

  static ThresholdPolicy alpha(double a);
  static ThresholdPolicy power_of_two() { return ThresholdPolicy(Kind::PowerOfTwo, 1.0); }

  Kind kind() const { return kind_; }
  double alpha_value() const { return alpha_; }

  // Thresholds are whole numbers for every s.
  bool integral() const;

  long double threshold(std::int64_t s) const;

  // Number of consecutive counts s, s+1, ... sharing threshold(s).
  std::int64_t run_length(std::int64_t s) const;

  // threshold(s0) + ... + threshold(s0 + k - 1). Exact for integral policies.
  Amount sum(std::int64_t s0, std::int64_t k) const;

  // `alpha(1.0)` / `power2`
  std::string describe() const;
  static ThresholdPolicy parse(std::string_view text);

  friend bool operator==(const ThresholdPolicy&, const ThresholdPolicy&) = default;

 private:
  ThresholdPolicy(Kind k, double a) : kind_(k), alpha_(a) {}

  Kind kind_;
  double alpha_;
};

inline constexpr std::int64_t kUnboundedRun = std::numeric_limits<std::int64_t>::max();

}  // namespace rbsim
