#pragma once

#include <cstdint>
#include <initializer_list>
#include <utility>

#include "rbsim/core_model.hpp"
#include "rbsim/estimators.hpp"

namespace rbsim::testing {

inline JobSpec good(JobId id, Tick t) { return JobSpec{id, JobKind::Good, t, std::nullopt}; }
inline JobSpec bad(JobId id, Tick t) { return JobSpec{id, JobKind::Bad, t, std::nullopt}; }

inline Estimator table(std::initializer_list<std::pair<Tick, Rational>> pts) {
  std::vector<Estimator::Point> v;
  for (const auto& [t, w] : pts) v.push_back({t, w});
  return Estimator::point_table(std::move(v));
}

// Unit mass on every good job: the estimate is exact.
inline Estimator indicator_of(const EventScript& s) {
  std::vector<Estimator::Point> v;
  for (Tick t : good_times(s)) v.push_back({t, Rational(1)});
  return Estimator::point_table(std::move(v));
}

}  // namespace rbsim::testing
