#include "rbsim/types.hpp"

#include <algorithm>
#include <cstdio>

namespace rbsim {

const char* to_string(JobKind kind) { return kind == JobKind::Good ? "good" : "bad"; }

std::string int128_to_string(__int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  std::string out;
  while (u > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

std::string real_to_string(long double v) {
  if (v == std::floor(v) && std::fabs(v) < 1.0e30L) {
    return int128_to_string(static_cast<__int128>(v));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17Lg", v);
  return buf;
}

std::string Amount::str() const {
  if (exact()) return int128_to_string(whole_);
  return real_to_string(value());
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace rbsim
