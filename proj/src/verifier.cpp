#include "rbsim/verifier.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "rbsim/engine_latency.hpp"
#include "rbsim/engine_sync.hpp"
#include "rbsim/generators.hpp"

namespace rbsim {

namespace {

constexpr long double kSlack = 1e-9L;

long double lg(long double v) { return std::log2(v); }

struct Checker {
  std::vector<Violation> out;

  // Flags observed > bound (with a relative tolerance for float-valued sides).
  void at_most(const char* check, long double observed, long double bound, std::string context) {
    if (observed > bound + kSlack * std::max(1.0L, std::fabs(bound))) {
      out.push_back(Violation{check, bound, observed, std::move(context)});
    }
  }
  void at_least(const char* check, long double observed, long double bound, std::string context) {
    if (observed < bound - kSlack * std::max(1.0L, std::fabs(bound))) {
      out.push_back(Violation{check, bound, observed, std::move(context)});
    }
  }
};

std::string ctx(const char* what, std::int64_t index) { return std::string(what) + " " + std::to_string(index); }

}  // namespace

std::string describe(const Violation& v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "bound=%.10Lg observed=%.10Lg", v.bound, v.observed);
  return v.check + ": " + buf + (v.context.empty() ? "" : " (" + v.context + ")");
}

std::vector<Violation> check_run(const RunReport& r, std::int64_t gamma, std::optional<std::int64_t> M) {
  if (gamma < 1) throw std::invalid_argument("check_run: gamma must be >= 1");
  Checker c;
  const auto& l = r.ledger;
  const long double g = static_cast<long double>(r.goods_total);
  const long double gam = static_cast<long double>(gamma);
  const long double B = l.adversary_B.value();

  // Ledger consistency.
  c.at_most("ledger.provisioning", l.provisioning.value(),
            static_cast<long double>(r.goods_serviced + r.bads_serviced), "");
  c.at_least("ledger.provisioning", l.provisioning.value(),
             static_cast<long double>(r.goods_serviced + r.bads_serviced), "");
  for (const auto* a : {&l.rb_good, &l.rb_overpay, &l.provisioning, &l.adversary_B, &l.dropped_good_charge}) {
    c.at_least("ledger.nonnegative", a->value(), 0.0L, "");
  }
  c.at_most("ledger.overpay", l.rb_overpay.value(), l.rb_good.value(), "rb_overpay <= rb_good");
  if (static_cast<std::int64_t>(r.per_job.size()) == r.goods_total) {
    long double paid = 0.0L;
    std::int64_t serviced = 0;
    for (const auto& [id, o] : r.per_job) {
      paid += o.paid;
      serviced += o.serviced ? 1 : 0;
    }
    c.at_most("ledger.rb_good", paid, l.rb_good.value(), "sum of per-job payments");
    c.at_least("ledger.rb_good", paid, l.rb_good.value(), "sum of per-job payments");
    c.at_most("ledger.goods_serviced", static_cast<long double>(serviced),
              static_cast<long double>(r.goods_serviced), "");
    c.at_least("ledger.goods_serviced", static_cast<long double>(serviced),
               static_cast<long double>(r.goods_serviced), "");
  }

  c.at_most("iterations.upper", static_cast<long double>(r.closed_iterations()), gam * (g + 1), "");

  if (r.engine == EngineKind::Sync) {
    for (const auto& it : r.iterations) {
      c.at_most("iteration.goods", static_cast<long double>(it.goods_serviced), gam * (gam + 1),
                ctx("iteration", it.index));
    }
    if (r.goods_total + r.bads_total > 0) {
      long double need = std::max(1.0L, (g - gam * gam) / (3 * std::pow(gam, 4.0L)));
      c.at_least("iterations.lower", static_cast<long double>(r.iterations.size()), need, "");
    }
    for (const auto& [id, o] : r.per_job) c.at_most("messages.per_good", o.messages, 3.0L, ctx("job", id));
    if (r.policy.kind() == ThresholdPolicy::Kind::Alpha) {
      const long double a = r.policy.alpha_value();
      bool open_tail = !r.iterations.empty() && !r.iterations.back().closed;
      const long double ell = gam * (g + 1) + (open_tail ? 1 : 0);
      const long double b = static_cast<long double>(r.bads_serviced);
      if (b > ell) {
        long double need = std::pow(b - ell, a + 1) / ((a + 1) * std::pow(ell, a));
        c.at_least("adversary.cost", B, need, "");
      }
    }
    return c.out;
  }

  if (r.policy.kind() != ThresholdPolicy::Kind::PowerOfTwo) return c.out;
  const long double m = static_cast<long double>(M ? *M : (r.latency ? r.latency->M : 1));
  const long double Lt = static_cast<long double>(r.latency ? r.latency->L : 0);

  for (std::size_t k = 0; k < r.epochs.size(); ++k) {
    const Epoch& e = r.epochs[k];
    const long double Bi = e.B_i.value();
    const long double Bprev = k > 0 ? r.epochs[k - 1].B_i.value() : 0.0L;
    const std::string where = ctx("epoch", e.index);
    c.at_most("epoch.max_threshold", e.max_threshold, 4 * gam * gam * std::sqrt(Bi + 1), where);
    c.at_most("epoch.goods", static_cast<long double>(e.goods_generated), 4 * m * (lg(gam * (Bi + 1)) + 1), where);
    if (e.overpay_i.value() > 0) {
      bool near_start = e.spans_iteration_start || (k > 0 && r.epochs[k - 1].spans_iteration_start);
      if (!near_start)
        c.out.push_back(Violation{"epoch.overpay_needs_iteration_start", 0.0L, e.overpay_i.value(), where});
      c.at_most("epoch.overpay", e.overpay_i.value(),
                8 * m * gam * gam * (std::sqrt(Bprev) + std::sqrt(Bi) + 1) * (lg(gam * (Bi + 1)) + 2), where);
    }
  }

  const long double rounds = 4 * lg(gam * (B + 1)) + 3;
  for (const auto& [id, o] : r.per_job) {
    const std::string where = ctx("job", id);
    c.at_most("good.messages", static_cast<long double>(o.messages), rounds, where);
    if (o.serviced) c.at_most("good.wait", static_cast<long double>(o.service_time - o.gen_time), Lt * rounds, where);
    for (std::size_t k = 1; k < o.submissions.size(); ++k) {
      long double h = o.submissions[k];
      bool pow2 = h >= 1 && std::exp2(std::floor(lg(h))) == h;
      if (!pow2 || h <= o.submissions[k - 1]) {
        c.out.push_back(Violation{"good.doubling", o.submissions[k - 1], h, where});
        break;
      }
    }
  }
  return c.out;
}

std::vector<TrialViolation> random_suite(EngineKind engine, std::int64_t trials, std::uint64_t seed,
                                         std::int64_t max_jobs) {
  const bool latency = engine == EngineKind::Latency;
  std::vector<TrialViolation> out;
  for (std::int64_t k = 0; k < trials; ++k) {
    std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(k) * 2 + (latency ? 1 : 0));
    GeneratedCase c = latency ? gen_random_latency(s, max_jobs) : gen_random_sync(s, max_jobs);
    std::int64_t gamma = gap_oracle(c.script, c.estimator).gamma;
    std::vector<Violation> vs;
    if (latency) {
      vs = check_run(run_latency(c.script, ThresholdPolicy::power_of_two(), c.estimator), gamma);
    } else {
      for (double a : {0.0, 0.5, 1.0, 2.0}) {
        auto v = check_run(run_sync(c.script, ThresholdPolicy::alpha(a), c.estimator), gamma);
        vs.insert(vs.end(), v.begin(), v.end());
      }
    }
    for (auto& v : vs) out.push_back(TrialViolation{k, c.meta.family, std::move(v)});
  }
  return out;
}

LowerBoundStats lowerbound_trials(const ThresholdPolicy& policy, std::int64_t gamma, std::int64_t g0,
                                  std::int64_t n, std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("lowerbound_trials: trials must be positive");
  LowerBoundStats s;
  s.trials = trials;
  long double sum_a = 0.0L, sum_root = 0.0L;
  for (std::int64_t k = 0; k < trials; ++k) {
    GeneratedCase gc = gen_lowerbound(gamma, g0, n, mix_seed(seed, static_cast<std::uint64_t>(k)));
    RunReport r = run_sync(gc.script, policy, gc.estimator);
    sum_a += r.ledger.a_total().value();
    sum_root += std::sqrt(static_cast<long double>(gamma) * r.ledger.adversary_B.value() *
                          static_cast<long double>(gc.meta.g));
  }
  s.mean_A = static_cast<double>(sum_a / static_cast<long double>(trials));
  s.mean_sqrt_gammaBg = static_cast<double>(sum_root / static_cast<long double>(trials));
  s.ratio = s.mean_sqrt_gammaBg > 0 ? s.mean_A / s.mean_sqrt_gammaBg : std::numeric_limits<double>::infinity();
  return s;
}

}  // namespace rbsim
