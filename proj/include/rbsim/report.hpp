#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rbsim/core_model.hpp"
#include "rbsim/estimators.hpp"
#include "rbsim/policies.hpp"
#include "rbsim/types.hpp"

namespace rbsim {

struct CostLedger {
  Amount rb_good;       // every RB solution submitted by good clients
  Amount rb_overpay;    // part of rb_good above the threshold at service time
  Amount provisioning;  // one unit per serviced job
  Amount adversary_B;   // accepted bad solutions
  std::int64_t msgs_server_to_clients = 0;
  std::int64_t msgs_clients_to_server = 0;
  Amount dropped_good_charge;

  Amount a_total() const { return rb_good + provisioning; }
};

struct IterationRecord {
  std::int64_t index = 0;  // 1-based
  Tick start = 0;
  Tick end = 0;
  std::int64_t goods_serviced = 0;
  std::int64_t bads_serviced = 0;
  Rational est_mass;
  bool closed = false;  // est_mass >= 1; only the trailing iteration may be open
};

struct JobOutcome {
  JobId id = 0;
  Tick gen_time = 0;
  bool serviced = false;
  long double paid = 0.0L;
  std::int64_t bounces = 0;
  Tick service_time = 0;
  std::int64_t messages = 0;  // submissions sent + notices received
  long double overpay = 0.0L;
  std::vector<long double> submissions;  // hardness of every submission, in order
};

struct ThresholdChange {
  Tick time = 0;
  long double value = 0.0L;
};

// `count` bad services at t0, t0 + step, ..., each paying `unit`.
struct SpendRun {
  Tick t0 = 0;
  Tick step = 0;
  std::int64_t count = 0;
  long double unit = 0.0L;
};

struct Epoch {
  std::int64_t index = 0;  // 1-based
  Tick start = 0;
  Tick end = 0;
  Amount B_i;
  long double max_threshold = 0.0L;
  Amount overpay_i;
  bool spans_iteration_start = false;
  std::int64_t goods_generated = 0;
  bool quiet_tail = true;  // ends with 2L ticks free of threshold increases
};

enum class EngineKind { Sync, Latency };

struct RunReport {
  EngineKind engine = EngineKind::Sync;
  ThresholdPolicy policy = ThresholdPolicy::alpha(1.0);
  std::optional<LatencyParams> latency;

  CostLedger ledger;
  std::int64_t goods_total = 0;  // g
  std::int64_t bads_total = 0;   // b (jobs in the script)
  std::int64_t goods_serviced = 0;
  std::int64_t bads_serviced = 0;
  Tick end_time = 0;

  std::vector<IterationRecord> iterations;
  std::vector<Tick> iteration_starts;  // reset times after the first iteration
  std::map<JobId, JobOutcome> per_job;  // good jobs only
  std::vector<ThresholdChange> threshold_timeline;
  std::vector<SpendRun> spend;  // adversary spend, latency runs only
  std::vector<Epoch> epochs;    // latency runs only

  std::int64_t closed_iterations() const;
  std::int64_t max_bounces() const;
};

inline constexpr std::size_t kPerJobDetailCap = 100'000;

// Structured JSON with fixed key order. Above kPerJobDetailCap good jobs the
// per-job section is replaced by a bounce histogram.
std::string report_to_json(const RunReport& report, bool include_timeline = false);

}  // namespace rbsim
