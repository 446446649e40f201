#pragma once

// Server-side iteration bookkeeping shared by both engines.

#include <algorithm>

#include "rbsim/core_model.hpp"
#include "rbsim/estimators.hpp"
#include "rbsim/policies.hpp"
#include "rbsim/report.hpp"

namespace rbsim::detail {

class Server {
 public:
  Server(const ThresholdPolicy& policy, const Estimator& est, RunReport& rep, bool record_timeline)
      : policy_(policy), est_(est), rep_(rep), record_(record_timeline), th_(policy.threshold(0)) {
    if (record_) rep_.threshold_timeline.push_back({0, th_});
  }

  // Runs ahead of every server event at time t: the iteration closes once the
  // estimate over (iter_start, previous event] reaches 1.
  void before_event() {
    if (t_prev_ > iter_start_ && est_.estimate(iter_start_, t_prev_) >= Rational(1)) close(t_prev_);
  }

  long double threshold() const { return th_; }
  std::int64_t count() const { return s_; }

  // A bounce is a server event too.
  void touched(Tick t) { t_prev_ = t; }

  void serviced(Tick t, JobKind kind, std::int64_t n = 1) {
    s_ += n;
    (kind == JobKind::Good ? goods_ : bads_) += n;
    rep_.ledger.provisioning.add(static_cast<long double>(n));
    t_prev_ = t;
    set_threshold(t, policy_.threshold(s_));
  }

  // Largest number of jobs of the arithmetic run time(i) = t + i*step
  // (remaining of them) that can be serviced back to back from now without
  // an iteration close in between. With `constant`, also stop where the
  // threshold would change.
  std::int64_t chunk(Tick t, Tick step, std::int64_t remaining, bool constant) const {
    std::int64_t c = remaining;
    if (constant) c = std::min(c, policy_.run_length(s_));
    if (c <= 1) return 1;
    auto reach = est_.first_reach(iter_start_, Rational(1));
    if (!reach) return c;
    std::int64_t before = 0;  // jobs after the first whose predecessor precedes the reach time
    if (t < *reach) {
      before = step == 0 ? c - 1 : std::min(c - 1, (*reach - t + step - 1) / step);
    }
    return 1 + before;
  }

  void finish() {
    if (goods_ + bads_ == 0 && !(t_prev_ > iter_start_)) return;
    Rational mass = est_.estimate(iter_start_, t_prev_);
    if (goods_ + bads_ == 0 && mass == Rational(0)) return;
    push_record(t_prev_, mass, mass >= Rational(1));
  }

 private:
  void close(Tick at) {
    push_record(at, est_.estimate(iter_start_, at), true);
    rep_.iteration_starts.push_back(at);
    iter_start_ = at;
    s_ = 0;
    goods_ = bads_ = 0;
    set_threshold(at, policy_.threshold(0));
  }

  void push_record(Tick end, Rational mass, bool closed) {
    IterationRecord r;
    r.index = static_cast<std::int64_t>(rep_.iterations.size()) + 1;
    r.start = iter_start_;
    r.end = end;
    r.goods_serviced = goods_;
    r.bads_serviced = bads_;
    r.est_mass = mass;
    r.closed = closed;
    rep_.iterations.push_back(r);
  }

  void set_threshold(Tick t, long double v) {
    if (v == th_) return;
    th_ = v;
    if (record_) rep_.threshold_timeline.push_back({t, v});
  }

  const ThresholdPolicy& policy_;
  const Estimator& est_;
  RunReport& rep_;
  bool record_;
  long double th_;
  Tick iter_start_ = 0;
  Tick t_prev_ = 0;
  std::int64_t s_ = 0;
  std::int64_t goods_ = 0;
  std::int64_t bads_ = 0;
};

}  // namespace rbsim::detail
