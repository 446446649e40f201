#include "rbsim/engine_sync.hpp"

#include <cmath>
#include <stdexcept>

#include "server.hpp"

namespace rbsim {

RunReport run_sync(const EventScript& script, const ThresholdPolicy& policy, const Estimator& est,
                   RunOptions opts) {
  if (script.latency) {
    throw std::invalid_argument("run_sync: script carries latency parameters; use the latency engine");
  }
  RunReport rep;
  rep.engine = EngineKind::Sync;
  rep.policy = policy;
  rep.goods_total = good_count(script);
  rep.bads_total = bad_count(script);
  detail::Server srv(policy, est, rep, opts.record_timeline);

  for (const auto& e : script.jobs) {
    if (const auto* j = std::get_if<JobSpec>(&e)) {
      srv.before_event();
      long double th = srv.threshold();
      if (j->kind == JobKind::Good) {
        rep.ledger.rb_good.add(th);
        rep.ledger.msgs_clients_to_server += 1;
        rep.goods_serviced += 1;
        JobOutcome o;
        o.id = j->id;
        o.gen_time = j->gen_time;
        o.serviced = true;
        o.paid = th;
        o.service_time = j->gen_time;
        o.messages = 1;
        o.submissions = {th};
        rep.per_job[j->id] = std::move(o);
      } else {
        rep.ledger.adversary_B.add(th);
        rep.bads_serviced += 1;
      }
      srv.serviced(j->gen_time, j->kind);
      continue;
    }
    const auto& b = std::get<BadBatch>(e);
    for (std::int64_t i = 0; i < b.count;) {
      srv.before_event();
      std::int64_t c = srv.chunk(b.time_of(i), b.t_step, b.count - i, opts.record_timeline);
      rep.ledger.adversary_B += policy.sum(srv.count(), c);
      rep.bads_serviced += c;
      srv.serviced(b.time_of(i + c - 1), JobKind::Bad, c);
      i += c;
    }
  }
  rep.end_time = last_job_time(script);
  srv.finish();
  return rep;
}

LinearCosts closed_form_linear(std::int64_t n, std::int64_t gamma, double alpha) {
  if (gamma < 1 || n < 2 * gamma) throw std::invalid_argument("closed_form_linear: need n >= 2*gamma >= 2");
  auto term = [alpha](std::int64_t i) -> long double {
    if (alpha == 0.0) return 1.0L;
    return std::pow(static_cast<long double>(i), static_cast<long double>(alpha));
  };
  LinearCosts c;
  c.b = Amount(static_cast<__int128>(gamma));
  for (std::int64_t i = 1; i <= n - 2 * gamma; ++i) c.b.add(term(i));
  c.a_total = Amount(static_cast<__int128>(n));
  for (std::int64_t j = 1; j <= gamma; ++j) c.a_total.add(term(n - 2 * gamma + j));
  c.iterations = gamma + 1;
  return c;
}

}  // namespace rbsim
