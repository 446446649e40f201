#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rbsim/engine_latency.hpp"
#include "rbsim/engine_sync.hpp"
#include "rbsim/estimators.hpp"
#include "rbsim/generators.hpp"
#include "rbsim/script_io.hpp"
#include "rbsim/sweep.hpp"
#include "rbsim/verifier.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace rbsim;

namespace {

struct RunConfig {
  EventScript script;
  std::optional<ThresholdPolicy> policy;
  std::string engine;  // "", "sync" or "latency"
};

// A config is either a script document, or {"script": <path or document>,
// "policy": "...", "engine": "..."}.
RunConfig load_config(const fs::path& path) {
  std::string text = read_file(path);
  json doc = json::parse(text);
  RunConfig cfg;
  if (doc.contains("jobs")) {
    cfg.script = parse_script(text);
    return cfg;
  }
  const json& s = doc.at("script");
  if (s.is_string()) {
    fs::path p = s.get<std::string>();
    if (p.is_relative()) p = path.parent_path() / p;
    cfg.script = load_script(p);
  } else {
    cfg.script = parse_script(s.dump());
  }
  if (doc.contains("policy")) cfg.policy = ThresholdPolicy::parse(doc.at("policy").get<std::string>());
  cfg.engine = doc.value("engine", std::string());
  return cfg;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_file(out, text);
  }
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, std::string> kv;
  for (const auto& raw : items) {
    std::string item = raw;
    std::size_t start = 0;
    while (start <= item.size()) {
      std::size_t comma = item.find(',', start);
      std::string part = item.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!part.empty()) {
        std::size_t eq = part.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("gen: parameter '" + part + "' is not key=value");
        kv[part.substr(0, eq)] = part.substr(eq + 1);
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return kv;
}

GeneratedCase generate(const std::string& family, const std::map<std::string, std::string>& kv,
                       std::uint64_t seed) {
  std::map<std::string, std::string> left = kv;
  auto num = [&](const std::string& key, std::optional<std::int64_t> dflt = std::nullopt) -> std::int64_t {
    auto it = left.find(key);
    if (it == left.end()) {
      if (dflt) return *dflt;
      throw std::invalid_argument("gen " + family + ": missing parameter '" + key + "'");
    }
    std::int64_t v = std::stoll(it->second);
    left.erase(it);
    return v;
  };
  auto placement = [&]() {
    auto it = left.find("goods");
    if (it == left.end()) return GoodPlacement::Even;
    std::string v = it->second;
    left.erase(it);
    if (v == "even") return GoodPlacement::Even;
    if (v == "packed-left") return GoodPlacement::PackedLeft;
    throw std::invalid_argument("gen: goods must be 'even' or 'packed-left'");
  };
  GeneratedCase c;
  if (family == "linear-experiment") {
    std::int64_t n = num("n");
    c = gen_linear_experiment(n, num("gamma"));
  } else if (family == "lowerbound") {
    std::int64_t gamma = num("gamma");
    std::int64_t g0 = num("g0");
    std::int64_t n = num("n");
    c = gen_lowerbound(gamma, g0, n, static_cast<std::uint64_t>(num("seed", static_cast<std::int64_t>(seed))));
  } else if (family == "linpow-challenge") {
    std::int64_t z = num("z");
    std::int64_t M = num("M");
    std::int64_t gamma = num("gamma");
    c = gen_linpow_challenge(z, M, gamma, num("L"));
  } else if (family == "even-spread" || family == "packed-left") {
    std::int64_t b = num("b");
    std::int64_t g = num("g");
    std::int64_t iters = num("iters");
    GoodPlacement p = placement();
    c = family == "even-spread" ? gen_even_spread(b, g, iters, p) : gen_packed_left(b, g, iters, p);
  } else if (family == "poisson") {
    std::int64_t g = num("g");
    std::int64_t spacing = num("spacing", kDefaultTicksPerSecond);
    c = gen_poisson(g, spacing, static_cast<std::uint64_t>(num("seed", static_cast<std::int64_t>(seed))));
  } else {
    throw std::invalid_argument("gen: unknown family '" + family +
                                "' (linear-experiment, lowerbound, linpow-challenge, even-spread, packed-left, poisson)");
  }
  if (!left.empty()) throw std::invalid_argument("gen " + family + ": unknown parameter '" + left.begin()->first + "'");
  return c;
}

json violation_json(const Violation& v, const std::string& where) {
  return json{{"where", where},
              {"check", v.check},
              {"bound", static_cast<double>(v.bound)},
              {"observed", static_cast<double>(v.observed)},
              {"context", v.context}};
}

// Random-script invariant pass for one engine; returns the violation count.
std::int64_t verify_random(bool latency, std::int64_t trials, std::uint64_t seed, std::int64_t max_jobs) {
  auto found = random_suite(latency ? EngineKind::Latency : EngineKind::Sync, trials, seed, max_jobs);
  for (const auto& t : found) {
    std::string where = std::string(latency ? "latency" : "sync") + " trial " + std::to_string(t.trial) + " (" +
                        t.family + ")";
    std::cout << violation_json(t.violation, where).dump() << "\n";
  }
  return static_cast<std::int64_t>(found.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rbsim: resource-burning defense simulator"};
  app.require_subcommand(1);

  std::string config, out, suite, engine, policy_text, family;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::optional<std::int64_t> x_min, x_max;
  std::int64_t trials = 1000, max_jobs = 2000;
  bool timeline = false, fast = false;
  std::vector<std::string> params;

  auto* run = app.add_subcommand("run", "run one script and print its report as JSON");
  run->add_option("--config", config, "script or run config file")->required();
  run->add_option("--engine", engine, "sync or latency (default: from the script)");
  run->add_option("--policy", policy_text, "alpha(<a>) or power2");
  run->add_option("--out", out, "output path (default stdout)");
  run->add_flag("--timeline", timeline, "include the threshold timeline");

  auto* sweep = app.add_subcommand("sweep", "run an experiment grid and write CSV");
  sweep->add_option("--suite", suite, "linear-alpha, linear-gamma or linpow-m")->required();
  sweep->add_option("--out", out, "CSV path (default stdout)");
  sweep->add_option("--seed", seed, "master seed");
  sweep->add_option("--jobs", jobs, "parallel grid points");
  sweep->add_option("--x-min", x_min, "clip the grid axis from below");
  sweep->add_option("--x-max", x_max, "clip the grid axis from above");

  auto* gen = app.add_subcommand("gen", "generate a script");
  gen->add_option("family", family, "generator family")->required();
  gen->add_option("--params", params, "key=value parameters")->expected(0, -1);
  gen->add_option("--seed", seed, "seed for randomized families");
  gen->add_option("--out", out, "script path (default stdout)");

  auto* verify = app.add_subcommand("verify", "check every bound over generated runs");
  verify->add_option("--suite", suite, "all, random, sync, latency, or a sweep suite")->default_val("all");
  verify->add_option("--trials", trials, "random scripts per engine");
  verify->add_option("--seed", seed, "master seed");
  verify->add_option("--max-jobs", max_jobs, "largest random script");
  verify->add_option("--jobs", jobs, "parallel grid points for sweep suites");

  auto* gap = app.add_subcommand("gap", "estimation gap of a script against its estimator");
  gap->add_option("--config", config, "script file")->required();
  gap->add_flag("--fast", fast, "use the subarray scan instead of the exhaustive oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) {
      RunConfig cfg = load_config(config);
      if (!engine.empty()) cfg.engine = engine;
      if (!policy_text.empty()) cfg.policy = ThresholdPolicy::parse(policy_text);
      if (cfg.engine.empty()) cfg.engine = cfg.script.latency ? "latency" : "sync";
      if (cfg.engine != "sync" && cfg.engine != "latency") throw std::invalid_argument("unknown engine '" + cfg.engine + "'");
      auto problems = validate_script(cfg.script);
      if (!problems.empty()) {
        for (const auto& p : problems) std::cerr << "rbsim: invalid script: " << p << "\n";
        return 2;
      }
      RunReport r;
      if (cfg.engine == "sync") {
        r = run_sync(cfg.script, cfg.policy.value_or(ThresholdPolicy::alpha(1.0)), cfg.script.estimator,
                     RunOptions{timeline});
      } else {
        r = run_latency(cfg.script, cfg.policy.value_or(ThresholdPolicy::power_of_two()), cfg.script.estimator);
      }
      emit(out, report_to_json(r, timeline));
      return 0;
    }
    if (*sweep) {
      SweepSpec spec{suite, x_min, x_max, seed, jobs};
      emit(out, rows_to_csv(run_sweep(spec)));
      return 0;
    }
    if (*gen) {
      GeneratedCase c = generate(family, parse_params(params), seed);
      emit(out, emit_script(c.script));
      std::cerr << "rbsim: " << c.meta.family << " g=" << c.meta.g << " b=" << c.meta.b
                << " gamma_target=" << c.meta.gamma_target << "\n";
      return 0;
    }
    if (*gap) {
      EventScript s = load_script(config);
      GapReport g = fast ? estimation_gap(s, s.estimator) : gap_oracle(s, s.estimator);
      json doc{{"gamma", g.gamma}};
      doc["witness"] = g.witness ? json::array({g.witness->lo, g.witness->hi}) : json(nullptr);
      std::cout << doc.dump() << "\n";
      return 0;
    }
    if (*verify) {
      std::int64_t bad = 0;
      bool known = false;
      if (suite == "all" || suite == "random" || suite == "sync") {
        bad += verify_random(false, trials, seed, max_jobs);
        known = true;
      }
      if (suite == "all" || suite == "random" || suite == "latency") {
        bad += verify_random(true, trials, seed, max_jobs);
        known = true;
      }
      for (const auto& s : sweep_suites()) {
        if (suite != "all" && suite != s) continue;
        known = true;
        try {
          run_sweep(SweepSpec{s, std::nullopt, std::nullopt, seed, jobs});
        } catch (const SweepViolation& e) {
          for (const auto& v : e.violations) std::cout << violation_json(v, e.what()).dump() << "\n";
          bad += static_cast<std::int64_t>(e.violations.size());
        }
      }
      if (!known) throw std::invalid_argument("verify: unknown suite '" + suite + "'");
      std::cerr << "rbsim: " << bad << " violation(s)\n";
      return bad == 0 ? 0 : 1;
    }
  } catch (const SweepViolation& e) {
    std::cerr << "rbsim: bound violated: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "rbsim: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
