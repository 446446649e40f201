#include "rbsim/engine_latency.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "server.hpp"

namespace rbsim {

namespace {

enum class EvKind { Submission, Notice, Batch };

struct Event {
  Tick time = 0;
  std::uint64_t seq = 0;
  EvKind kind = EvKind::Submission;
  JobId job = 0;
  std::int64_t attempt = 0;
  long double value = 0.0L;  // hardness or notice value; < 0 means "pay the threshold"
  JobKind job_kind = JobKind::Good;
  std::size_t batch = 0;
  std::int64_t cursor = 0;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return a.time != b.time ? a.time > b.time : a.seq > b.seq;
  }
};

struct Client {
  long double x = 1.0L;
  std::int64_t attempt = 0;
};

bool has_scheduled_delay(const EventScript& script, const BadBatch& b) {
  auto it = script.delays.lower_bound(DelayKey{b.first_id, 0, Leg::ClientToServer});
  return it != script.delays.end() && it->first.job < b.first_id + b.count;
}

// Jobs at or before T among t0, t0 + step, ... (count of them).
std::int64_t jobs_through(const SpendRun& r, Tick T) {
  if (T < r.t0) return 0;
  if (r.step == 0) return r.count;
  return std::min(r.count, (T - r.t0) / r.step + 1);
}

RunReport execute(const EventScript& script, const ThresholdPolicy& policy, const Estimator& est,
                  bool batching) {
  if (!script.latency) {
    throw std::invalid_argument("run_latency: script has no latency parameters; use the sync engine");
  }
  const Tick L = script.latency->L;
  RunReport rep;
  rep.engine = EngineKind::Latency;
  rep.policy = policy;
  rep.latency = script.latency;
  rep.goods_total = good_count(script);
  rep.bads_total = bad_count(script);
  detail::Server srv(policy, est, rep, true);

  std::priority_queue<Event, std::vector<Event>, Later> queue;
  std::uint64_t next_seq = 0;
  std::map<JobId, Client> clients;
  std::vector<BadBatch> batches;

  auto push = [&](Event ev) {
    ev.seq = next_seq++;
    queue.push(ev);
  };
  auto submit_good = [&](JobId id, Tick now) {
    Client& c = clients[id];
    JobOutcome& o = rep.per_job[id];
    o.paid += c.x;
    o.messages += 1;
    o.submissions.push_back(c.x);
    rep.ledger.rb_good.add(c.x);
    rep.ledger.msgs_clients_to_server += 1;
    Event ev;
    ev.time = now + delay_for(script, id, c.attempt, Leg::ClientToServer);
    ev.kind = EvKind::Submission;
    ev.job = id;
    ev.attempt = c.attempt;
    ev.value = c.x;
    ev.job_kind = JobKind::Good;
    push(ev);
  };
  auto submit_bad = [&](JobId id, Tick gen, long double hardness) {
    Event ev;
    ev.time = gen + delay_for(script, id, 0, Leg::ClientToServer);
    ev.kind = EvKind::Submission;
    ev.job = id;
    ev.value = hardness;
    ev.job_kind = JobKind::Bad;
    push(ev);
  };

  for (const auto& e : script.jobs) {
    if (const auto* j = std::get_if<JobSpec>(&e)) {
      if (j->kind == JobKind::Good) {
        Client& c = clients[j->id];
        if (j->initial_hardness) c.x = static_cast<long double>(*j->initial_hardness);
        JobOutcome& o = rep.per_job[j->id];
        o.id = j->id;
        o.gen_time = j->gen_time;
        submit_good(j->id, j->gen_time);
      } else {
        submit_bad(j->id, j->gen_time,
                   j->initial_hardness ? static_cast<long double>(*j->initial_hardness) : -1.0L);
      }
      continue;
    }
    const auto& b = std::get<BadBatch>(e);
    if (!batching || has_scheduled_delay(script, b)) {
      for (std::int64_t i = 0; i < b.count; ++i) submit_bad(b.first_id + i, b.time_of(i), -1.0L);
      continue;
    }
    Event ev;
    ev.time = b.t_start + L;
    ev.kind = EvKind::Batch;
    ev.batch = batches.size();
    batches.push_back(b);
    push(ev);
  }

  Tick end_time = 0;
  while (!queue.empty()) {
    Event ev = queue.top();
    queue.pop();
    end_time = std::max(end_time, ev.time);

    if (ev.kind == EvKind::Notice) {
      JobOutcome& o = rep.per_job[ev.job];
      if (o.serviced) continue;
      Client& c = clients[ev.job];
      c.x = std::max(c.x, ev.value);
      c.attempt += 1;
      submit_good(ev.job, ev.time);
      continue;
    }

    srv.before_event();
    const long double th = srv.threshold();

    if (ev.kind == EvKind::Batch) {
      const BadBatch& b = batches[ev.batch];
      std::int64_t c = srv.chunk(b.time_of(ev.cursor) + L, b.t_step, b.count - ev.cursor, true);
      if (b.t_step > 0 && !queue.empty()) {
        // Stop before the first job that the next queued event precedes.
        const Event& top = queue.top();
        Tick room = top.time - L - b.time_of(ev.cursor);
        if (ev.seq > top.seq) room -= 1;
        c = std::min(c, room < 0 ? std::int64_t{1} : room / b.t_step + 1);
      }
      Tick first = b.time_of(ev.cursor) + L;
      Tick last = b.time_of(ev.cursor + c - 1) + L;
      rep.ledger.adversary_B += policy.sum(srv.count(), c);
      rep.bads_serviced += c;
      rep.spend.push_back(SpendRun{first, b.t_step, c, th});
      srv.serviced(last, JobKind::Bad, c);
      end_time = std::max(end_time, last);
      ev.cursor += c;
      if (ev.cursor < b.count) {
        ev.time = b.time_of(ev.cursor) + L;
        queue.push(ev);  // keeps its original seq
      }
      continue;
    }

    // Submission.
    long double h = ev.value < 0 ? th : ev.value;
    if (h >= th) {
      if (ev.job_kind == JobKind::Good) {
        JobOutcome& o = rep.per_job[ev.job];
        o.serviced = true;
        o.service_time = ev.time;
        o.overpay = h - th;
        rep.ledger.rb_overpay.add(h - th);
        rep.goods_serviced += 1;
      } else {
        rep.ledger.adversary_B.add(h);
        rep.bads_serviced += 1;
        rep.spend.push_back(SpendRun{ev.time, 0, 1, h});
      }
      srv.serviced(ev.time, ev.job_kind);
      continue;
    }
    srv.touched(ev.time);
    if (ev.job_kind == JobKind::Bad) continue;
    JobOutcome& o = rep.per_job[ev.job];
    o.bounces += 1;
    o.messages += 1;
    rep.ledger.msgs_server_to_clients += 1;
    Event n;
    n.time = ev.time + delay_for(script, ev.job, ev.attempt, Leg::ServerToClient);
    n.kind = EvKind::Notice;
    n.job = ev.job;
    n.attempt = ev.attempt;
    n.value = th;
    push(n);
  }

  rep.end_time = end_time;
  srv.finish();

  rep.epochs = compute_epochs(rep.threshold_timeline, L, rep.spend, end_time);
  auto epoch_of = [&](Tick t) -> Epoch& {
    auto it = std::lower_bound(rep.epochs.begin(), rep.epochs.end(), t,
                               [](const Epoch& e, Tick v) { return e.end < v; });
    if (it == rep.epochs.end()) --it;
    return *it;
  };
  for (const auto& [id, o] : rep.per_job) {
    Epoch& g = epoch_of(o.gen_time);
    g.goods_generated += 1;
    if (o.serviced && o.overpay > 0) epoch_of(o.service_time).overpay_i.add(o.overpay);
  }
  for (Tick t : rep.iteration_starts) epoch_of(t).spans_iteration_start = true;
  return rep;
}

}  // namespace

RunReport run_latency(const EventScript& script, const ThresholdPolicy& policy, const Estimator& est) {
  return execute(script, policy, est, true);
}

RunReport run_latency_naive(const EventScript& script, const ThresholdPolicy& policy,
                            const Estimator& est) {
  return execute(script, policy, est, false);
}

std::vector<Epoch> compute_epochs(const std::vector<ThresholdChange>& timeline, Tick L,
                                  const std::vector<SpendRun>& spend, Tick end_time) {
  std::vector<Tick> increases;
  for (std::size_t k = 1; k < timeline.size(); ++k) {
    if (timeline[k].value > timeline[k - 1].value) increases.push_back(timeline[k].time);
  }
  // Latest increase in (lo, hi], if any.
  auto last_in = [&](Tick lo, Tick hi) -> std::optional<Tick> {
    auto it = std::upper_bound(increases.begin(), increases.end(), hi);
    if (it == increases.begin()) return std::nullopt;
    --it;
    if (*it <= lo) return std::nullopt;
    return *it;
  };

  std::vector<Epoch> out;
  Tick start = 0;
  while (true) {
    Tick t = start + 2 * L;
    while (auto u = last_in(t - 2 * L, t)) t = *u + 2 * L;
    Epoch e;
    e.index = static_cast<std::int64_t>(out.size()) + 1;
    e.start = start;
    if (t > end_time) {
      e.end = std::max(end_time, start);
      e.quiet_tail = false;
      out.push_back(e);
      break;
    }
    e.end = t;
    out.push_back(e);
    if (!last_in(t, std::max(t, end_time))) {
      out.back().end = std::max(end_time, t);
      break;
    }
    start = t;
  }

  std::size_t k = 0;
  for (auto& e : out) {
    bool first = e.index == 1;
    for (; k < timeline.size() && timeline[k].time <= e.end; ++k) {
      e.max_threshold = std::max(e.max_threshold, timeline[k].value);
    }
    Tick lo = first ? e.start - 1 : e.start;
    for (const auto& r : spend) {
      std::int64_t n = jobs_through(r, e.end) - jobs_through(r, lo);
      if (n > 0) e.B_i.add(r.unit * static_cast<long double>(n));
    }
  }
  return out;
}

}  // namespace rbsim
