#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rbsim/types.hpp"

namespace rbsim {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);

// Half-open interval (lo, hi].
struct Interval {
  Tick lo = 0;
  Tick hi = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Additive estimate of the number of good jobs in a time interval.
//
// PointTable places nonnegative rational masses at points in time;
// PoissonGrid places unit mass at every positive multiple of `spacing`.
class Estimator {
 public:
  enum class Kind { PointTable, PoissonGrid };

  struct Point {
    Tick time = 0;
    Rational weight;
    friend bool operator==(const Point&, const Point&) = default;
  };

  Estimator() : prefix_(1, Rational(0)) {}

  static Estimator point_table(std::vector<Point> points);
  static Estimator poisson_grid(Tick spacing);

  Kind kind() const { return kind_; }
  Tick spacing() const { return spacing_; }
  // Merged, time-sorted table points (empty for PoissonGrid).
  const std::vector<Point>& points() const { return points_; }

  Rational estimate(Interval iv) const;
  Rational estimate(Tick lo, Tick hi) const { return estimate(Interval{lo, hi}); }

  // Smallest t > from with estimate((from, t]) >= amount, if one exists.
  std::optional<Tick> first_reach(Tick from, Rational amount) const;

  // Times in (lo, hi] where the estimate carries nonzero mass, with the mass.
  std::vector<Point> masses_in(Tick lo, Tick hi) const;

  // `poisson_grid(spacing=<ticks>)` or `point_table([(t,w),...])`.
  std::string describe() const;
  static Estimator parse(std::string_view text);

  friend bool operator==(const Estimator& a, const Estimator& b) {
    return a.kind_ == b.kind_ && a.spacing_ == b.spacing_ && a.points_ == b.points_;
  }

 private:
  Rational prefix_through(Tick t) const;

  Kind kind_ = Kind::PointTable;
  Tick spacing_ = 0;
  std::vector<Point> points_;
  std::vector<Rational> prefix_;  // prefix_[k] = sum of the first k weights
};

struct EventScript;

struct GapReport {
  std::int64_t gamma = 1;
  // An interval on which gamma - 1 fails; present when gamma > 1.
  std::optional<Interval> witness;
};

inline constexpr std::size_t kGapOracleJobCap = 10'000;

// Exhaustive estimation-gap computation: enumerates every interval whose
// endpoints sit on the breakpoints of g and the estimate (good-job times and
// estimator mass points, each taken with the tick just before it). O(P^2).
// Throws std::length_error when the script holds more than `job_cap` jobs.
GapReport gap_oracle(const EventScript& script, const Estimator& est,
                     std::size_t job_cap = kGapOracleJobCap);

// Same quantity via per-gamma maximum-subarray scans, O(P log gamma). Used for
// large inputs; property tests hold it equal to gap_oracle.
GapReport estimation_gap(const EventScript& script, const Estimator& est);

}  // namespace rbsim
