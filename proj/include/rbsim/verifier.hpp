#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbsim/policies.hpp"
#include "rbsim/report.hpp"

namespace rbsim {

struct Violation {
  std::string check;
  long double bound = 0.0L;
  long double observed = 0.0L;
  std::string context;
};

std::string describe(const Violation& v);

// Every bound that a conforming run must satisfy, evaluated on the realized
// g, b, B and per-epoch B_i. `M` defaults to the report's latency parameter.
//
// All runs: ledger consistency; closed iterations <= gamma(g+1).
// Sync runs: goods per iteration <= gamma(gamma+1); iterations >=
//   max(1, (g - gamma^2) / (3 gamma^4)); <= 3 messages per good; and for
//   Alpha policies B >= (b - l)^(a+1) / ((a+1) l^a), l = gamma(g+1) plus one
//   when the trailing iteration is still open.
// Latency runs with PowerOfTwo: per-epoch threshold, arrival and overpayment
//   bounds, overpaying epochs next to an iteration start, per-good message and
//   waiting-time bounds, doubling submissions.
std::vector<Violation> check_run(const RunReport& report, std::int64_t gamma,
                                 std::optional<std::int64_t> M = std::nullopt);

struct TrialViolation {
  std::int64_t trial = 0;
  std::string family;
  Violation violation;
};

// Seeded random scripts through one engine, each checked at its exact
// estimation gap. Sync scripts run under Alpha(0, 0.5, 1, 2); latency scripts
// under PowerOfTwo.
std::vector<TrialViolation> random_suite(EngineKind engine, std::int64_t trials, std::uint64_t seed,
                                         std::int64_t max_jobs);

struct LowerBoundStats {
  double mean_A = 0.0;
  double mean_sqrt_gammaBg = 0.0;
  double ratio = 0.0;
  std::int64_t trials = 0;
};

// Runs `trials` seeded draws of gen_lowerbound through the sync engine.
LowerBoundStats lowerbound_trials(const ThresholdPolicy& policy, std::int64_t gamma, std::int64_t g0,
                                  std::int64_t n, std::int64_t trials, std::uint64_t seed);

}  // namespace rbsim
