#pragma once

#include <cstdint>
#include <string>

#include "rbsim/core_model.hpp"
#include "rbsim/estimators.hpp"

namespace rbsim {

struct CaseMeta {
  std::int64_t g = 0;
  std::int64_t b = 0;
  std::int64_t gamma_target = 1;
  std::string family;
};

// script.estimator and estimator are the same object.
struct GeneratedCase {
  EventScript script;
  Estimator estimator;
  CaseMeta meta;
};

// Jobs at ticks 1..n: n - gamma bad then gamma good. Unit masses sit on the
// first gamma jobs and on the last one.
GeneratedCase gen_linear_experiment(std::int64_t n, std::int64_t gamma);

// Jobs at ticks 1..n. A fair coin picks g = gamma*g0 or g = g0/gamma; each
// block of n/g consecutive jobs holds one uniformly chosen good job. Every job
// carries estimator mass g0/n, so the estimate cannot tell the two apart.
GeneratedCase gen_lowerbound(std::int64_t gamma, std::int64_t g0, std::int64_t n, std::uint64_t seed);

// Period i (0 <= i < z) spans 2L ticks starting at L + 2Li: 2^i bad jobs land
// first, then every good job still bounced plus M new ones. A final batch of M
// goods lands at the start of period z, when the attack is over. Afterwards
// one post-attack service in gamma carries unit estimator mass.
// Requires (z + 1)M + 1 <= 2L and L >= M.
GeneratedCase gen_linpow_challenge(std::int64_t z, std::int64_t M, std::int64_t gamma, Tick L);

enum class GoodPlacement { Even, PackedLeft };

// n_iters back-to-back segments; each holds its bad jobs, then its goods, with
// unit mass on its last job. Bad counts are balanced (larger counts first).
// Goods are balanced too, or all put in the first segment with PackedLeft.
GeneratedCase gen_even_spread(std::int64_t b, std::int64_t g, std::int64_t n_iters,
                              GoodPlacement goods = GoodPlacement::Even);
// Same, with all bad jobs in the first segment.
GeneratedCase gen_packed_left(std::int64_t b, std::int64_t g, std::int64_t n_iters,
                              GoodPlacement goods = GoodPlacement::Even);

// g good jobs with exponential gaps of mean `spacing`, against a Poisson grid
// of the same spacing.
GeneratedCase gen_poisson(std::int64_t g, Tick spacing, std::uint64_t seed);

// Random admissible inputs for invariant sweeps, mixing the families above
// with unstructured scripts (up to max_jobs jobs).
GeneratedCase gen_random_sync(std::uint64_t seed, std::int64_t max_jobs);
GeneratedCase gen_random_latency(std::uint64_t seed, std::int64_t max_jobs);

}  // namespace rbsim
