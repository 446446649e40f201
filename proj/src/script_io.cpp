#include "rbsim/script_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rbsim {

using json = nlohmann::ordered_json;

std::string emit_script(const EventScript& script) {
  json doc;
  json jobs = json::array();
  JobId next_id = 1;
  for (const auto& e : script.jobs) {
    json j;
    if (const auto* s = std::get_if<JobSpec>(&e)) {
      j["id"] = s->id;
      j["kind"] = to_string(s->kind);
      j["t"] = s->gen_time;
      if (s->initial_hardness) j["hardness"] = *s->initial_hardness;
      next_id = s->id + 1;
    } else {
      const auto& b = std::get<BadBatch>(e);
      j["kind"] = "bad";
      if (b.first_id != next_id) j["first_id"] = b.first_id;
      j["count"] = b.count;
      j["t_start"] = b.t_start;
      j["t_step"] = b.t_step;
      next_id = b.first_id + b.count;
    }
    jobs.push_back(std::move(j));
  }
  doc["jobs"] = std::move(jobs);
  doc["estimator"] = script.estimator.describe();
  if (script.latency) {
    doc["latency"] = json{{"L", script.latency->L}, {"M", script.latency->M}};
  } else {
    doc["latency"] = nullptr;
  }
  json delays = json::array();
  for (const auto& [k, d] : script.delays) {
    delays.push_back(json{{"job", k.job}, {"attempt", k.attempt}, {"leg", to_string(k.leg)}, {"delay", d}});
  }
  doc["delays"] = std::move(delays);
  doc["horizon"] = script.horizon;
  return doc.dump(1) + "\n";
}

namespace {

JobKind parse_kind(const std::string& s) {
  if (s == "good") return JobKind::Good;
  if (s == "bad") return JobKind::Bad;
  throw std::invalid_argument("script: unknown job kind '" + s + "'");
}

Leg parse_leg(const std::string& s) {
  if (s == "c2s") return Leg::ClientToServer;
  if (s == "s2c") return Leg::ServerToClient;
  throw std::invalid_argument("script: unknown delay leg '" + s + "'");
}

}  // namespace

EventScript parse_script(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("script: ") + e.what());
  }
  EventScript s;
  try {
    JobId next_id = 1;
    for (const auto& j : doc.at("jobs")) {
      if (j.contains("count")) {
        if (parse_kind(j.at("kind").get<std::string>()) != JobKind::Bad) {
          throw std::invalid_argument("script: batches must be bad jobs");
        }
        BadBatch b;
        b.first_id = j.value("first_id", next_id);
        b.count = j.at("count").get<std::int64_t>();
        b.t_start = j.at("t_start").get<Tick>();
        b.t_step = j.at("t_step").get<Tick>();
        next_id = b.first_id + b.count;
        s.jobs.emplace_back(b);
      } else {
        JobSpec js;
        js.id = j.at("id").get<JobId>();
        js.kind = parse_kind(j.at("kind").get<std::string>());
        js.gen_time = j.at("t").get<Tick>();
        if (j.contains("hardness")) js.initial_hardness = j.at("hardness").get<std::int64_t>();
        next_id = js.id + 1;
        s.jobs.emplace_back(js);
      }
    }
    if (doc.contains("estimator")) s.estimator = Estimator::parse(doc.at("estimator").get<std::string>());
    if (doc.contains("latency") && !doc.at("latency").is_null()) {
      const auto& l = doc.at("latency");
      s.latency = LatencyParams{l.at("L").get<Tick>(), l.at("M").get<std::int64_t>()};
    }
    if (doc.contains("delays")) {
      for (const auto& d : doc.at("delays")) {
        DelayKey k{d.at("job").get<JobId>(), d.at("attempt").get<std::int64_t>(),
                   parse_leg(d.at("leg").get<std::string>())};
        s.delays[k] = d.at("delay").get<Tick>();
      }
    }
    s.horizon = doc.value("horizon", Tick{0});
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("script: ") + e.what());
  }
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

EventScript load_script(const std::filesystem::path& path) { return parse_script(read_file(path)); }

void save_script(const EventScript& script, const std::filesystem::path& path) {
  write_file(path, emit_script(script));
}

}  // namespace rbsim
