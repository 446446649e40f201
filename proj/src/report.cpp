#include "rbsim/report.hpp"

#include <algorithm>
#include <limits>

#include <json.hpp>

namespace rbsim {

using json = nlohmann::ordered_json;

std::int64_t RunReport::closed_iterations() const {
  return std::count_if(iterations.begin(), iterations.end(), [](const IterationRecord& r) { return r.closed; });
}

std::int64_t RunReport::max_bounces() const {
  std::int64_t m = 0;
  for (const auto& [id, o] : per_job) m = std::max(m, o.bounces);
  return m;
}

namespace {

json amount_json(const Amount& a) {
  constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();
  if (a.exact() && a.whole() <= kMax && a.whole() >= -kMax) return static_cast<std::int64_t>(a.whole());
  return static_cast<double>(a.value());
}

json real_json(long double v) {
  if (v == std::floor(v) && std::fabs(v) < 9.0e18L) return static_cast<std::int64_t>(v);
  return static_cast<double>(v);
}

}  // namespace

std::string report_to_json(const RunReport& r, bool include_timeline) {
  json doc;
  doc["engine"] = r.engine == EngineKind::Sync ? "sync" : "latency";
  doc["policy"] = r.policy.describe();
  if (r.latency) {
    doc["latency"] = json{{"L", r.latency->L}, {"M", r.latency->M}};
  } else {
    doc["latency"] = nullptr;
  }
  const auto& l = r.ledger;
  doc["ledger"] = json{{"rb_good", amount_json(l.rb_good)},
                       {"rb_overpay", amount_json(l.rb_overpay)},
                       {"provisioning", amount_json(l.provisioning)},
                       {"A_total", amount_json(l.a_total())},
                       {"adversary_B", amount_json(l.adversary_B)},
                       {"msgs_server_to_clients", l.msgs_server_to_clients},
                       {"msgs_clients_to_server", l.msgs_clients_to_server},
                       {"dropped_good_charge", amount_json(l.dropped_good_charge)}};
  doc["goods_total"] = r.goods_total;
  doc["bads_total"] = r.bads_total;
  doc["goods_serviced"] = r.goods_serviced;
  doc["bads_serviced"] = r.bads_serviced;
  doc["end_time"] = r.end_time;

  json iters = json::array();
  for (const auto& it : r.iterations) {
    iters.push_back(json{{"index", it.index},
                         {"start", it.start},
                         {"end", it.end},
                         {"goods_serviced", it.goods_serviced},
                         {"bads_serviced", it.bads_serviced},
                         {"est_mass", to_string(it.est_mass)},
                         {"closed", it.closed}});
  }
  doc["iterations"] = std::move(iters);

  json epochs = json::array();
  for (const auto& e : r.epochs) {
    epochs.push_back(json{{"index", e.index},
                          {"start", e.start},
                          {"end", e.end},
                          {"B_i", amount_json(e.B_i)},
                          {"max_threshold", real_json(e.max_threshold)},
                          {"overpay_i", amount_json(e.overpay_i)},
                          {"spans_iteration_start", e.spans_iteration_start},
                          {"goods_generated", e.goods_generated},
                          {"quiet_tail", e.quiet_tail}});
  }
  doc["epochs"] = std::move(epochs);

  if (r.per_job.size() <= kPerJobDetailCap) {
    json jobs = json::array();
    for (const auto& [id, o] : r.per_job) {
      json subs = json::array();
      for (long double h : o.submissions) subs.push_back(real_json(h));
      jobs.push_back(json{{"id", id},
                          {"gen_time", o.gen_time},
                          {"serviced", o.serviced},
                          {"paid", real_json(o.paid)},
                          {"bounces", o.bounces},
                          {"service_time", o.service_time},
                          {"messages", o.messages},
                          {"overpay", real_json(o.overpay)},
                          {"submissions", std::move(subs)}});
    }
    doc["per_job"] = std::move(jobs);
  } else {
    std::map<std::int64_t, std::int64_t> hist;
    for (const auto& [id, o] : r.per_job) ++hist[o.bounces];
    json h = json::array();
    for (const auto& [b, c] : hist) h.push_back(json{{"bounces", b}, {"jobs", c}});
    doc["bounce_histogram"] = std::move(h);
  }

  if (include_timeline) {
    json tl = json::array();
    for (const auto& c : r.threshold_timeline) tl.push_back(json::array({c.time, real_json(c.value)}));
    doc["threshold_timeline"] = std::move(tl);
  }
  return doc.dump(1) + "\n";
}

}  // namespace rbsim
