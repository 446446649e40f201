#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbsim/types.hpp"
#include "rbsim/verifier.hpp"

namespace rbsim {

// Suites and their default grids:
//   linear-alpha  alpha in {0, 0.5, 1, 2} x x in [-1, 18], n = 10*2^x (5 at x=-1), gamma = 1
//   linear-gamma  gamma in {1, 2, 4, 8, 16, 32} x x in [3, 18], alpha = 1
//   linpow-m      M in {1, 2, 4, 8} x z in [10, 28], gamma = 8, L = 1000, power2
// x_min / x_max clip the inner axis (x, or z for linpow-m).
struct SweepSpec {
  std::string suite;
  std::optional<std::int64_t> x_min;
  std::optional<std::int64_t> x_max;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct SweepRow {
  std::string suite;
  std::string policy;
  std::optional<double> alpha;
  std::int64_t gamma = 1;
  std::optional<std::int64_t> M;
  std::int64_t x = 0;  // grid coordinate: x, or z for linpow-m
  std::int64_t n = 0;
  std::int64_t b = 0;
  std::int64_t g = 0;
  Amount A_total, A_rb, A_prov, A_overpay, B;
  std::int64_t iterations = 0;
  std::int64_t epochs = 0;
  std::int64_t msgs_s2c = 0;
  std::int64_t msgs_c2s = 0;
  std::int64_t max_bounces = 0;
  std::uint64_t seed = 0;
};

struct SweepViolation : std::runtime_error {
  SweepViolation(const std::string& what, std::vector<Violation> v)
      : std::runtime_error(what), violations(std::move(v)) {}
  std::vector<Violation> violations;
};

const std::vector<std::string>& sweep_suites();

// Rows in grid order. Every row passes check_run before it is returned;
// otherwise SweepViolation is thrown.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

std::string csv_header();
std::string csv_line(const SweepRow& row);
std::string rows_to_csv(const std::vector<SweepRow>& rows);

}  // namespace rbsim
