#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rbsim/estimators.hpp"
#include "rbsim/types.hpp"

namespace rbsim {

struct JobSpec {
  JobId id = 0;
  JobKind kind = JobKind::Good;
  Tick gen_time = 0;
  // Hardness attached to the first submission. Unset means: good clients
  // start at 1, bad jobs pay exactly the threshold in force on delivery.
  std::optional<std::int64_t> initial_hardness;

  friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

// Run of `count` bad jobs generated at t_start, t_start + t_step, ...
// Ids continue from the preceding job.
struct BadBatch {
  JobId first_id = 0;
  std::int64_t count = 0;
  Tick t_start = 0;
  Tick t_step = 0;

  Tick time_of(std::int64_t i) const { return t_start + i * t_step; }
  friend bool operator==(const BadBatch&, const BadBatch&) = default;
};

using JobEntry = std::variant<JobSpec, BadBatch>;

struct LatencyParams {
  Tick L = 1;
  std::int64_t M = 1;
  friend bool operator==(const LatencyParams&, const LatencyParams&) = default;
};

enum class Leg { ClientToServer, ServerToClient };

const char* to_string(Leg leg);

struct DelayKey {
  JobId job = 0;
  std::int64_t attempt = 0;  // submission index, 0 = first submission
  Leg leg = Leg::ClientToServer;
  auto operator<=>(const DelayKey&) const = default;
};

struct EventScript {
  std::vector<JobEntry> jobs;
  Estimator estimator;
  std::optional<LatencyParams> latency;
  std::map<DelayKey, Tick> delays;
  Tick horizon = 0;

  friend bool operator==(const EventScript&, const EventScript&) = default;
};

// Every job of the script in id order, with batches expanded.
std::vector<JobSpec> expand_jobs(const EventScript& script);

std::int64_t job_count(const EventScript& script);
std::int64_t good_count(const EventScript& script);
std::int64_t bad_count(const EventScript& script);
Tick last_job_time(const EventScript& script);

// Good-job generation times in id order.
std::vector<Tick> good_times(const EventScript& script);

// Delay for a message leg: the scheduled value, else L (the adversary-worst
// default), else 0 for zero-latency scripts.
Tick delay_for(const EventScript& script, JobId job, std::int64_t attempt, Leg leg);

// Human-readable list of every admissibility violation; empty iff valid.
std::vector<std::string> validate_script(const EventScript& script);

}  // namespace rbsim
