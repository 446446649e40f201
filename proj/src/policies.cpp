#include "rbsim/policies.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rbsim {

namespace {

std::uint64_t floor_pow2(std::int64_t v) { return std::bit_floor(static_cast<std::uint64_t>(v)); }

__int128 sum_linear(__int128 n) { return n * (n + 1) / 2; }
__int128 sum_squares(__int128 n) { return n * (n + 1) * (2 * n + 1) / 6; }

}  // namespace

ThresholdPolicy ThresholdPolicy::alpha(double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("policy: alpha must be a finite value >= 0");
  return ThresholdPolicy(Kind::Alpha, a);
}

bool ThresholdPolicy::integral() const {
  return kind_ == Kind::PowerOfTwo || alpha_ == std::floor(alpha_);
}

long double ThresholdPolicy::threshold(std::int64_t s) const {
  if (kind_ == Kind::PowerOfTwo) return static_cast<long double>(floor_pow2(s + 1));
  if (alpha_ == 0.0) return 1.0L;
  if (alpha_ == 1.0) return static_cast<long double>(s + 1);
  return std::pow(static_cast<long double>(s + 1), static_cast<long double>(alpha_));
}

std::int64_t ThresholdPolicy::run_length(std::int64_t s) const {
  if (kind_ == Kind::PowerOfTwo) return static_cast<std::int64_t>(2 * floor_pow2(s + 1)) - 1 - s;
  return alpha_ == 0.0 ? kUnboundedRun : 1;
}

Amount ThresholdPolicy::sum(std::int64_t s0, std::int64_t k) const {
  if (k <= 0) return Amount();
  if (kind_ == Kind::PowerOfTwo) {
    __int128 total = 0;
    std::int64_t s = s0, left = k;
    while (left > 0) {
      std::int64_t len = std::min(left, run_length(s));
      total += static_cast<__int128>(floor_pow2(s + 1)) * len;
      s += len;
      left -= len;
    }
    return Amount(total);
  }
  if (alpha_ == 0.0) return Amount(static_cast<__int128>(k));
  if (alpha_ == 1.0) return Amount(sum_linear(s0 + k) - sum_linear(s0));
  if (alpha_ == 2.0) return Amount(sum_squares(s0 + k) - sum_squares(s0));
  Amount a;
  for (std::int64_t i = 0; i < k; ++i) a.add(threshold(s0 + i));
  return a;
}

std::string ThresholdPolicy::describe() const {
  if (kind_ == Kind::PowerOfTwo) return "power2";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", alpha_);
  std::string v = buf;
  if (v.find_first_of(".e") == std::string::npos) v += ".0";
  return "alpha(" + v + ")";
}

ThresholdPolicy ThresholdPolicy::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text == "power2") return power_of_two();
  if (text.starts_with("alpha(") && text.ends_with(")")) {
    std::string body(text.substr(6, text.size() - 7));
    std::size_t used = 0;
    double a = 0.0;
    try {
      a = std::stod(body, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == body.size() && used > 0) return alpha(a);
  }
  throw std::invalid_argument("policy: expected 'alpha(<a>)' or 'power2', got '" + std::string(text) + "'");
}

}  // namespace rbsim
