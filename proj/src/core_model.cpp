#include "rbsim/core_model.hpp"

#include <algorithm>

namespace rbsim {

const char* to_string(Leg leg) { return leg == Leg::ClientToServer ? "c2s" : "s2c"; }

std::vector<JobSpec> expand_jobs(const EventScript& script) {
  std::vector<JobSpec> out;
  for (const auto& e : script.jobs) {
    if (const auto* j = std::get_if<JobSpec>(&e)) {
      out.push_back(*j);
      continue;
    }
    const auto& b = std::get<BadBatch>(e);
    for (std::int64_t i = 0; i < b.count; ++i) {
      out.push_back(JobSpec{b.first_id + i, JobKind::Bad, b.time_of(i), std::nullopt});
    }
  }
  return out;
}

std::int64_t job_count(const EventScript& script) {
  std::int64_t n = 0;
  for (const auto& e : script.jobs) {
    n += std::holds_alternative<JobSpec>(e) ? 1 : std::get<BadBatch>(e).count;
  }
  return n;
}

std::int64_t good_count(const EventScript& script) {
  std::int64_t n = 0;
  for (const auto& e : script.jobs) {
    if (const auto* j = std::get_if<JobSpec>(&e); j && j->kind == JobKind::Good) ++n;
  }
  return n;
}

std::int64_t bad_count(const EventScript& script) { return job_count(script) - good_count(script); }

Tick last_job_time(const EventScript& script) {
  Tick t = 0;
  for (const auto& e : script.jobs) {
    if (const auto* j = std::get_if<JobSpec>(&e)) {
      t = std::max(t, j->gen_time);
    } else {
      const auto& b = std::get<BadBatch>(e);
      if (b.count > 0) t = std::max(t, b.time_of(b.count - 1));
    }
  }
  return t;
}

std::vector<Tick> good_times(const EventScript& script) {
  std::vector<Tick> out;
  for (const auto& e : script.jobs) {
    if (const auto* j = std::get_if<JobSpec>(&e); j && j->kind == JobKind::Good) out.push_back(j->gen_time);
  }
  return out;
}

Tick delay_for(const EventScript& script, JobId job, std::int64_t attempt, Leg leg) {
  auto it = script.delays.find(DelayKey{job, attempt, leg});
  if (it != script.delays.end()) return it->second;
  return script.latency ? script.latency->L : 0;
}

std::vector<std::string> validate_script(const EventScript& script) {
  std::vector<std::string> v;
  auto say = [&](std::string s) { v.push_back(std::move(s)); };

  // Ordering, id uniqueness, batch shape.
  std::optional<JobId> prev_id;
  Tick prev_t = 0;
  std::vector<std::pair<JobId, JobId>> id_ranges;  // inclusive
  for (const auto& e : script.jobs) {
    JobId first = 0, last = 0;
    Tick t_first = 0, t_last = 0;
    if (const auto* j = std::get_if<JobSpec>(&e)) {
      first = last = j->id;
      t_first = t_last = j->gen_time;
      if (j->initial_hardness && *j->initial_hardness <= 0) {
        say("job " + std::to_string(j->id) + ": hardness " + std::to_string(*j->initial_hardness) +
            " is not positive");
      }
    } else {
      const auto& b = std::get<BadBatch>(e);
      if (b.count < 1) {
        say("batch at id " + std::to_string(b.first_id) + ": count " + std::to_string(b.count) + " < 1");
        continue;
      }
      if (b.t_step < 0) {
        say("batch at id " + std::to_string(b.first_id) + ": t_step " + std::to_string(b.t_step) + " < 0");
      }
      first = b.first_id;
      last = b.first_id + b.count - 1;
      t_first = b.t_start;
      t_last = b.time_of(b.count - 1);
    }
    if (t_first < 0) say("job " + std::to_string(first) + ": negative time " + std::to_string(t_first));
    if (prev_id && first <= *prev_id) {
      say("job id " + std::to_string(first) + " not above previous id " + std::to_string(*prev_id));
    }
    if (prev_id && t_first < prev_t) {
      say("job " + std::to_string(first) + ": time " + std::to_string(t_first) + " before previous time " +
          std::to_string(prev_t));
    }
    prev_id = last;
    prev_t = std::max(prev_t, t_last);
    id_ranges.emplace_back(first, last);
  }

  auto known = [&](JobId id) {
    auto it = std::upper_bound(id_ranges.begin(), id_ranges.end(), id,
                               [](JobId x, const std::pair<JobId, JobId>& r) { return x < r.first; });
    return it != id_ranges.begin() && std::prev(it)->second >= id;
  };
  for (const auto& [key, d] : script.delays) {
    std::string what = "delay " + std::to_string(d);
    std::string where = " (job " + std::to_string(key.job) + ", attempt " + std::to_string(key.attempt) +
                        ", " + to_string(key.leg) + ")";
    if (d < 0) say(what + " < 0" + where);
    if (script.latency && d > script.latency->L) {
      say(what + " > L=" + std::to_string(script.latency->L) + where);
    }
    if (key.attempt < 0) say("negative attempt index" + where);
    if (!known(key.job)) say("delay for unknown job" + where);
  }

  if (script.latency) {
    const auto& lp = *script.latency;
    if (lp.L < 1) say("latency L=" + std::to_string(lp.L) + " is not positive");
    if (lp.M < 1) say("latency M=" + std::to_string(lp.M) + " is not positive");
    if (lp.L >= 1 && lp.M >= 1) {
      std::vector<Tick> goods = good_times(script);
      std::sort(goods.begin(), goods.end());
      // Window [goods[i], goods[i] + L) for each i; j is one past its last good.
      std::size_t j = 0;
      std::optional<std::size_t> last_reported;
      for (std::size_t i = 0; i < goods.size(); ++i) {
        j = std::max(j, i);
        while (j < goods.size() && goods[j] < goods[i] + lp.L) ++j;
        auto held = static_cast<std::int64_t>(j - i);
        if (held > lp.M && last_reported != j) {
          say("good-burst window [" + std::to_string(goods[i]) + "," + std::to_string(goods[i] + lp.L) +
              ") holds " + std::to_string(held) + " > M=" + std::to_string(lp.M));
          last_reported = j;
        }
      }
    }
  }

  if (script.horizon < 0) say("horizon " + std::to_string(script.horizon) + " is negative");
  return v;
}

}  // namespace rbsim
