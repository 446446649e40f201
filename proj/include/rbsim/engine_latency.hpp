#pragma once

#include <vector>

#include "rbsim/core_model.hpp"
#include "rbsim/engine_sync.hpp"
#include "rbsim/estimators.hpp"
#include "rbsim/policies.hpp"
#include "rbsim/report.hpp"

namespace rbsim {

// Partially synchronous execution: job submissions and threshold notices are
// messages delivered through a (time, seq) priority queue. Bounced good
// clients raise their hardness to the largest notice received and resubmit.
// Always records the threshold timeline and extracts epochs.
// Throws std::invalid_argument for scripts without latency parameters.
RunReport run_latency(const EventScript& script, const ThresholdPolicy& policy,
                      const Estimator& est);

// Per-job reference execution: batches are expanded into single jobs before
// running. Same semantics as run_latency; used to check the batch fast path.
RunReport run_latency_naive(const EventScript& script, const ThresholdPolicy& policy,
                            const Estimator& est);

// Greedy left-to-right epoch partition of [0, end_time]: an epoch closes at
// the earliest t with no threshold increase in [t - 2L, t]. Once no increase
// remains, the rest of the run joins the last epoch. Fills B_i and
// max_threshold (largest value set inside the epoch).
std::vector<Epoch> compute_epochs(const std::vector<ThresholdChange>& timeline, Tick L,
                                  const std::vector<SpendRun>& spend, Tick end_time);

}  // namespace rbsim
