#pragma once

#include <cstdint>
#include <tuple>

#include "rbsim/core_model.hpp"
#include "rbsim/estimators.hpp"
#include "rbsim/policies.hpp"
#include "rbsim/report.hpp"

namespace rbsim {

struct RunOptions {
  // Record every threshold change. Off by default for sync runs: Alpha
  // policies change the threshold on every service.
  bool record_timeline = false;
};

// Zero-latency server loop. Every job pays exactly the threshold in force
// when it arrives; batches of bad jobs are charged in closed form.
// Throws std::invalid_argument for scripts that carry latency parameters.
RunReport run_sync(const EventScript& script, const ThresholdPolicy& policy,
                   const Estimator& est, RunOptions opts = {});

struct LinearCosts {
  Amount a_total;
  Amount b;
  std::int64_t iterations = 0;
};

// Analytic costs of the linear-experiment input family under Alpha(alpha):
//   B = gamma + sum_{i=1}^{n-2gamma} i^alpha
//   A = n + sum_{j=1}^{gamma} (n - 2gamma + j)^alpha
//   iterations = gamma + 1
// Evaluated term by term, independently of the engine's summation path.
LinearCosts closed_form_linear(std::int64_t n, std::int64_t gamma, double alpha);

}  // namespace rbsim
