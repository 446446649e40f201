#include "rbsim/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <thread>

#include "rbsim/engine_latency.hpp"
#include "rbsim/engine_sync.hpp"
#include "rbsim/generators.hpp"

namespace rbsim {

namespace {

struct Point {
  std::int64_t outer_index = 0;
  std::int64_t x = 0;
};

std::int64_t linear_n(std::int64_t x) { return x < 0 ? 5 : 10 * (std::int64_t{1} << x); }

std::int64_t gamma_for(const GeneratedCase& c) {
  if (static_cast<std::size_t>(job_count(c.script)) <= kGapOracleJobCap) {
    return std::max(c.meta.gamma_target, gap_oracle(c.script, c.estimator).gamma);
  }
  return c.meta.gamma_target;
}

SweepRow make_row(const std::string& suite, const GeneratedCase& c, const RunReport& r, std::int64_t gamma,
                  std::int64_t x, std::uint64_t seed) {
  SweepRow row;
  row.suite = suite;
  row.policy = r.policy.describe();
  if (r.policy.kind() == ThresholdPolicy::Kind::Alpha) row.alpha = r.policy.alpha_value();
  row.gamma = gamma;
  if (r.latency) row.M = r.latency->M;
  row.x = x;
  row.n = job_count(c.script);
  row.b = r.bads_total;
  row.g = r.goods_total;
  row.A_total = r.ledger.a_total();
  row.A_rb = r.ledger.rb_good;
  row.A_prov = r.ledger.provisioning;
  row.A_overpay = r.ledger.rb_overpay;
  row.B = r.ledger.adversary_B;
  row.iterations = static_cast<std::int64_t>(r.iterations.size());
  row.epochs = static_cast<std::int64_t>(r.epochs.size());
  row.msgs_s2c = r.ledger.msgs_server_to_clients;
  row.msgs_c2s = r.ledger.msgs_clients_to_server;
  row.max_bounces = r.max_bounces();
  row.seed = seed;
  return row;
}

}  // namespace

const std::vector<std::string>& sweep_suites() {
  static const std::vector<std::string> kSuites = {"linear-alpha", "linear-gamma", "linpow-m"};
  return kSuites;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  static const std::vector<double> kAlphas = {0.0, 0.5, 1.0, 2.0};
  static const std::vector<std::int64_t> kGammas = {1, 2, 4, 8, 16, 32};
  static const std::vector<std::int64_t> kMs = {1, 2, 4, 8};

  std::int64_t lo = 0, hi = 0, outer = 0;
  if (spec.suite == "linear-alpha") {
    lo = -1, hi = 18, outer = static_cast<std::int64_t>(kAlphas.size());
  } else if (spec.suite == "linear-gamma") {
    lo = 3, hi = 18, outer = static_cast<std::int64_t>(kGammas.size());
  } else if (spec.suite == "linpow-m") {
    lo = 10, hi = 28, outer = static_cast<std::int64_t>(kMs.size());
  } else {
    throw std::invalid_argument("sweep: unknown suite '" + spec.suite + "'");
  }
  lo = spec.x_min.value_or(lo);
  hi = spec.x_max.value_or(hi);
  if (spec.suite != "linpow-m" && (lo < -1 || hi > 40)) throw std::invalid_argument("sweep: x out of range [-1, 40]");
  if (spec.suite == "linpow-m" && (lo < 1 || hi > 40)) throw std::invalid_argument("sweep: z out of range [1, 40]");

  std::vector<Point> grid;
  for (std::int64_t o = 0; o < outer; ++o) {
    for (std::int64_t x = lo; x <= hi; ++x) grid.push_back(Point{o, x});
  }

  auto run_point = [&](const Point& p) -> SweepRow {
    std::uint64_t seed = mix_seed(mix_seed(spec.seed, static_cast<std::uint64_t>(p.outer_index)),
                                  static_cast<std::uint64_t>(p.x + 1000));
    GeneratedCase c;
    RunReport r;
    if (spec.suite == "linear-alpha" || spec.suite == "linear-gamma") {
      bool by_alpha = spec.suite == "linear-alpha";
      double a = by_alpha ? kAlphas[static_cast<std::size_t>(p.outer_index)] : 1.0;
      std::int64_t gam = by_alpha ? 1 : kGammas[static_cast<std::size_t>(p.outer_index)];
      std::int64_t n = linear_n(p.x);
      if (n < 2 * gam) throw std::invalid_argument("sweep: n=" + std::to_string(n) + " < 2*gamma");
      c = gen_linear_experiment(n, gam);
      r = run_sync(c.script, ThresholdPolicy::alpha(a), c.estimator);
    } else {
      std::int64_t M = kMs[static_cast<std::size_t>(p.outer_index)];
      c = gen_linpow_challenge(p.x, M, 8, 1000);
      r = run_latency(c.script, ThresholdPolicy::power_of_two(), c.estimator);
    }
    std::int64_t gamma = gamma_for(c);
    auto v = check_run(r, gamma);
    if (!v.empty()) {
      std::string msg = spec.suite + " x=" + std::to_string(p.x) + ": " + describe(v.front());
      throw SweepViolation(msg, v);
    }
    return make_row(spec.suite, c, r, gamma, p.x, seed);
  };

  std::vector<std::optional<SweepRow>> rows(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < grid.size();) {
      try {
        rows[k] = run_point(grid[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  int threads = std::max(1, std::min<int>(spec.jobs, static_cast<int>(grid.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<SweepRow> out;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    out.push_back(std::move(*rows[k]));
  }
  return out;
}

std::string csv_header() {
  return "suite,policy,alpha,gamma,M,n,b,g,A_total,A_rb,A_prov,A_overpay,B,iterations,epochs,msgs_s2c,msgs_c2s,"
         "max_bounces,seed";
}

std::string csv_line(const SweepRow& r) {
  auto i = [](std::int64_t v) { return std::to_string(v); };
  std::string alpha;
  if (r.alpha) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", *r.alpha);
    alpha = buf;
  }
  std::string s;
  for (const std::string& f :
       {r.suite, r.policy, alpha, i(r.gamma), r.M ? i(*r.M) : std::string(), i(r.n), i(r.b), i(r.g),
        r.A_total.str(), r.A_rb.str(), r.A_prov.str(), r.A_overpay.str(), r.B.str(), i(r.iterations),
        i(r.epochs), i(r.msgs_s2c), i(r.msgs_c2s), i(r.max_bounces), std::to_string(r.seed)}) {
    if (!s.empty()) s += ',';
    s += f;
  }
  return s;
}

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = csv_header() + "\n";
  for (const auto& r : rows) out += csv_line(r) + "\n";
  return out;
}

}  // namespace rbsim
