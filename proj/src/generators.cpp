#include "rbsim/generators.hpp"

#include "rbsim/engine_latency.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace rbsim {

namespace {

void finish_case(GeneratedCase& c, std::string family) {
  c.script.estimator = c.estimator;
  c.meta.g = good_count(c.script);
  c.meta.b = bad_count(c.script);
  c.meta.family = std::move(family);
  c.script.horizon = std::max(c.script.horizon, last_job_time(c.script));
}

void add_bads(EventScript& s, JobId& next_id, std::int64_t count, Tick t_start, Tick t_step) {
  if (count <= 0) return;
  s.jobs.emplace_back(BadBatch{next_id, count, t_start, t_step});
  next_id += count;
}

void add_job(EventScript& s, JobId& next_id, JobKind kind, Tick t) {
  s.jobs.emplace_back(JobSpec{next_id++, kind, t, std::nullopt});
}

std::vector<std::int64_t> balanced(std::int64_t total, std::int64_t parts) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(parts), total / parts);
  for (std::int64_t i = 0; i < total % parts; ++i) out[static_cast<std::size_t>(i)] += 1;
  return out;
}

GeneratedCase segments(const std::vector<std::int64_t>& bads, const std::vector<std::int64_t>& goods,
                       std::string family) {
  GeneratedCase c;
  std::vector<Estimator::Point> masses;
  JobId id = 1;
  Tick t = 1;
  for (std::size_t k = 0; k < bads.size(); ++k) {
    if (bads[k] + goods[k] == 0) continue;
    add_bads(c.script, id, bads[k], t, 1);
    t += bads[k];
    for (std::int64_t j = 0; j < goods[k]; ++j) add_job(c.script, id, JobKind::Good, t++);
    masses.push_back({t - 1, Rational(1)});
  }
  c.estimator = Estimator::point_table(std::move(masses));
  finish_case(c, std::move(family));
  c.meta.gamma_target = estimation_gap(c.script, c.estimator).gamma;
  return c;
}

std::vector<std::int64_t> place_goods(std::int64_t g, std::int64_t n_iters, GoodPlacement p) {
  if (p == GoodPlacement::Even) return balanced(g, n_iters);
  std::vector<std::int64_t> out(static_cast<std::size_t>(n_iters), 0);
  out[0] = g;
  return out;
}

void check_spread_args(std::int64_t b, std::int64_t g, std::int64_t n_iters) {
  if (b < 0 || g < 0 || n_iters < 1) throw std::invalid_argument("spread generators: need b, g >= 0 and n_iters >= 1");
}

}  // namespace

GeneratedCase gen_linear_experiment(std::int64_t n, std::int64_t gamma) {
  if (gamma < 1 || n < 2 * gamma) throw std::invalid_argument("gen_linear_experiment: need n >= 2*gamma >= 2");
  GeneratedCase c;
  JobId id = 1;
  add_bads(c.script, id, n - gamma, 1, 1);
  for (Tick t = n - gamma + 1; t <= n; ++t) add_job(c.script, id, JobKind::Good, t);
  std::vector<Estimator::Point> masses;
  for (Tick t = 1; t <= gamma; ++t) masses.push_back({t, Rational(1)});
  masses.push_back({n, Rational(1)});
  c.estimator = Estimator::point_table(std::move(masses));
  finish_case(c, "linear-experiment");
  c.meta.gamma_target = gamma;
  return c;
}

GeneratedCase gen_lowerbound(std::int64_t gamma, std::int64_t g0, std::int64_t n, std::uint64_t seed) {
  if (gamma < 1 || g0 < 1 || g0 % gamma != 0 || n < 1 || n % (gamma * g0) != 0) {
    throw std::invalid_argument("gen_lowerbound: need g0 a positive multiple of gamma and n a multiple of gamma*g0");
  }
  std::mt19937_64 rng(seed);
  std::int64_t g = (rng() & 1) ? gamma * g0 : g0 / gamma;
  std::int64_t block = n / g;
  std::vector<bool> good(static_cast<std::size_t>(n), false);
  for (std::int64_t k = 0; k < g; ++k) {
    std::int64_t pick = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(block));
    good[static_cast<std::size_t>(k * block + pick)] = true;
  }
  GeneratedCase c;
  JobId id = 1;
  std::vector<Estimator::Point> masses;
  Rational w(g0, n);
  for (Tick t = 1; t <= n; ++t) {
    add_job(c.script, id, good[static_cast<std::size_t>(t - 1)] ? JobKind::Good : JobKind::Bad, t);
    masses.push_back({t, w});
  }
  c.estimator = Estimator::point_table(std::move(masses));
  finish_case(c, "lowerbound");
  c.meta.gamma_target = gamma;
  return c;
}

GeneratedCase gen_linpow_challenge(std::int64_t z, std::int64_t M, std::int64_t gamma, Tick L) {
  if (z < 1 || M < 1 || gamma < 1) throw std::invalid_argument("gen_linpow_challenge: need z, M, gamma >= 1");
  if (z > 40) throw std::invalid_argument("gen_linpow_challenge: z > 40 is out of range");
  if ((z + 1) * M + 1 > 2 * L || L < M) {
    throw std::invalid_argument("gen_linpow_challenge: need (z+1)*M + 1 <= 2L and L >= M (got z=" +
                                std::to_string(z) + ", M=" + std::to_string(M) + ", L=" + std::to_string(L) + ")");
  }
  const Tick T0 = L;
  auto period = [&](std::int64_t i) { return T0 + 2 * L * i; };
  // Slot of the q-th attack-time good inside a period; newer goods come first.
  auto lane = [&](std::int64_t q) { return M + 2 + (z * M - 1 - q); };

  GeneratedCase c;
  JobId id = 1;
  for (std::int64_t i = 0; i < z; ++i) {
    add_bads(c.script, id, std::int64_t{1} << i, period(i) + 1 - L, 0);
    for (std::int64_t j = M - 1; j >= 0; --j) add_job(c.script, id, JobKind::Good, period(i) + lane(i * M + j) - L);
  }
  for (std::int64_t j = 0; j < M; ++j) add_job(c.script, id, JobKind::Good, period(z) + 2 + j - L);
  c.script.latency = LatencyParams{L, M};

  // Post-attack services in order: every attack-time good in period z by
  // lane, then the final batch in period z + 1.
  std::vector<Tick> services;
  for (std::int64_t k = z * M - 1; k >= 0; --k) services.push_back(period(z) + lane(k));
  for (std::int64_t j = 0; j < M; ++j) services.push_back(period(z + 1) + 2 + j);
  auto every_gamma = [gamma](const std::vector<Tick>& times) {
    std::vector<Estimator::Point> masses;
    for (std::size_t k = 0; k < times.size(); ++k) {
      if ((k + 1) % static_cast<std::size_t>(gamma) == 0 || k + 1 == times.size()) {
        masses.push_back({times[k], Rational(1)});
      }
    }
    return Estimator::point_table(std::move(masses));
  };
  c.estimator = every_gamma(services);
  // Post-attack goods carry hardness 2^z. When that is below what gamma
  // services in a row can reach, some bounce again and land later than the
  // slots above; re-derive the masses from actual service times until stable.
  for (int round = 0; round < 64; ++round) {
    c.script.estimator = c.estimator;
    RunReport r = run_latency(c.script, ThresholdPolicy::power_of_two(), c.estimator);
    std::vector<Tick> actual;
    for (const auto& [id, o] : r.per_job) actual.push_back(o.service_time);
    std::sort(actual.begin(), actual.end());
    Estimator next = every_gamma(actual);
    services = actual;
    if (next == c.estimator) break;
    c.estimator = next;
  }
  c.script.horizon = services.back();
  finish_case(c, "linpow-challenge");
  c.meta.gamma_target = std::max(gamma, estimation_gap(c.script, c.estimator).gamma);
  return c;
}

GeneratedCase gen_even_spread(std::int64_t b, std::int64_t g, std::int64_t n_iters, GoodPlacement goods) {
  check_spread_args(b, g, n_iters);
  return segments(balanced(b, n_iters), place_goods(g, n_iters, goods), "even-spread");
}

GeneratedCase gen_packed_left(std::int64_t b, std::int64_t g, std::int64_t n_iters, GoodPlacement goods) {
  check_spread_args(b, g, n_iters);
  std::vector<std::int64_t> bads(static_cast<std::size_t>(n_iters), 0);
  bads[0] = b;
  return segments(bads, place_goods(g, n_iters, goods), "packed-left");
}

GeneratedCase gen_poisson(std::int64_t g, Tick spacing, std::uint64_t seed) {
  if (g < 1 || spacing < 1) throw std::invalid_argument("gen_poisson: need g >= 1 and spacing >= 1");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> gap(1.0 / static_cast<double>(spacing));
  GeneratedCase c;
  JobId id = 1;
  double t = 0.0;
  Tick last = 0;
  for (std::int64_t k = 0; k < g; ++k) {
    t += gap(rng);
    last = std::max<Tick>(last, static_cast<Tick>(t) + 1);
    add_job(c.script, id, JobKind::Good, last);
  }
  c.estimator = Estimator::poisson_grid(spacing);
  finish_case(c, "poisson");
  c.meta.gamma_target = estimation_gap(c.script, c.estimator).gamma;
  return c;
}

namespace {

Rational random_weight(std::mt19937_64& rng) {
  static const Rational kWeights[] = {Rational(1, 3), Rational(1, 2), Rational(1), Rational(1), Rational(3, 2),
                                      Rational(2)};
  return kWeights[rng() % std::size(kWeights)];
}

std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

GeneratedCase unstructured(std::mt19937_64& rng, std::int64_t max_jobs, std::optional<LatencyParams> lat) {
  GeneratedCase c;
  std::int64_t n = uniform(rng, 1, std::max<std::int64_t>(1, max_jobs));
  double p_good = 0.05 + 0.6 * static_cast<double>(rng() % 1000) / 1000.0;
  Tick max_step = lat ? std::max<Tick>(1, lat->L / 2) : 3;
  JobId id = 1;
  Tick t = 1;
  std::vector<Tick> goods;
  std::int64_t made = 0;
  while (made < n) {
    t += uniform(rng, 0, max_step);
    if (rng() % 8 == 0) {
      std::int64_t k = std::min<std::int64_t>(n - made, uniform(rng, 1, 40));
      Tick step = uniform(rng, 0, 2);
      add_bads(c.script, id, k, t, step);
      t += step * (k - 1);
      made += k;
      continue;
    }
    bool good = static_cast<double>(rng() % 1000) / 1000.0 < p_good;
    if (good && lat && static_cast<std::int64_t>(goods.size()) >= lat->M &&
        t - goods[goods.size() - static_cast<std::size_t>(lat->M)] < lat->L) {
      good = false;
    }
    if (good) {
      goods.push_back(t);
      add_job(c.script, id, JobKind::Good, t);
    } else {
      JobSpec j{id++, JobKind::Bad, t, std::nullopt};
      if (lat && rng() % 5 == 0) j.initial_hardness = std::int64_t{1} << uniform(rng, 0, 4);
      c.script.jobs.emplace_back(j);
    }
    ++made;
  }
  std::vector<Estimator::Point> masses;
  std::int64_t n_points = uniform(rng, 0, std::max<std::int64_t>(1, n / 3));
  for (std::int64_t k = 0; k < n_points; ++k) masses.push_back({uniform(rng, 1, t), random_weight(rng)});
  c.estimator = Estimator::point_table(std::move(masses));
  c.script.latency = lat;
  finish_case(c, "random");
  return c;
}

GeneratedCase structured(std::mt19937_64& rng, std::int64_t max_jobs) {
  switch (rng() % 5) {
    case 0: {
      std::int64_t n = uniform(rng, 2, std::max<std::int64_t>(2, max_jobs));
      return gen_linear_experiment(n, uniform(rng, 1, std::min<std::int64_t>(8, n / 2)));
    }
    case 1: {
      std::int64_t gamma = std::int64_t{1} << uniform(rng, 0, 2);
      std::int64_t g0 = gamma * uniform(rng, 1, 4);
      std::int64_t unit = gamma * g0;
      std::int64_t n = unit * uniform(rng, 1, std::max<std::int64_t>(1, max_jobs / unit));
      return gen_lowerbound(gamma, g0, n, rng());
    }
    case 2:
    case 3: {
      std::int64_t b = uniform(rng, 0, std::max<std::int64_t>(0, max_jobs - 50));
      std::int64_t g = uniform(rng, 0, std::min<std::int64_t>(50, max_jobs - b));
      std::int64_t iters = uniform(rng, 1, 20);
      auto placement = rng() % 2 ? GoodPlacement::Even : GoodPlacement::PackedLeft;
      return rng() % 2 ? gen_even_spread(b, g, iters, placement) : gen_packed_left(b, g, iters, placement);
    }
    default:
      return gen_poisson(uniform(rng, 1, std::min<std::int64_t>(200, max_jobs)), 1000, rng());
  }
}

// Largest number of goods in any window [t, t + L).
std::int64_t max_burst(std::vector<Tick> goods, Tick L) {
  std::sort(goods.begin(), goods.end());
  std::int64_t best = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < goods.size(); ++i) {
    j = std::max(j, i);
    while (j < goods.size() && goods[j] < goods[i] + L) ++j;
    best = std::max(best, static_cast<std::int64_t>(j - i));
  }
  return best;
}

void random_delays(std::mt19937_64& rng, EventScript& s) {
  const Tick L = s.latency->L;
  for (const auto& e : s.jobs) {
    const auto* j = std::get_if<JobSpec>(&e);
    if (!j || rng() % 2) continue;
    std::int64_t attempts = j->kind == JobKind::Good ? 6 : 1;
    for (std::int64_t a = 0; a < attempts; ++a) {
      if (rng() % 2) s.delays[{j->id, a, Leg::ClientToServer}] = uniform(rng, 0, L);
      if (j->kind == JobKind::Good && rng() % 2) s.delays[{j->id, a, Leg::ServerToClient}] = uniform(rng, 0, L);
    }
  }
}

}  // namespace

GeneratedCase gen_random_sync(std::uint64_t seed, std::int64_t max_jobs) {
  std::mt19937_64 rng(seed);
  GeneratedCase c = rng() % 3 == 0 ? unstructured(rng, max_jobs, std::nullopt) : structured(rng, max_jobs);
  c.meta.gamma_target = estimation_gap(c.script, c.estimator).gamma;
  return c;
}

GeneratedCase gen_random_latency(std::uint64_t seed, std::int64_t max_jobs) {
  std::mt19937_64 rng(seed);
  GeneratedCase c;
  switch (rng() % 3) {
    case 0: {
      std::int64_t z = uniform(rng, 1, 9);
      while ((std::int64_t{1} << z) - 1 + 2 * z > max_jobs && z > 1) --z;
      std::int64_t M = uniform(rng, 1, 3);
      std::int64_t gamma = uniform(rng, 1, std::min<std::int64_t>(3, std::int64_t{1} << z));
      Tick L = std::max<Tick>((z + 1) * M + 1, uniform(rng, 1, 60));
      c = gen_linpow_challenge(z, M, gamma, L);
      break;
    }
    case 1: {
      LatencyParams lp{uniform(rng, 1, 40), uniform(rng, 1, 4)};
      c = unstructured(rng, max_jobs, lp);
      break;
    }
    default: {
      c = structured(rng, max_jobs);
      Tick L = uniform(rng, 1, 20);
      c.script.latency = LatencyParams{L, std::max<std::int64_t>(1, max_burst(good_times(c.script), L))};
      break;
    }
  }
  random_delays(rng, c.script);
  c.meta.gamma_target = std::max(c.meta.gamma_target, estimation_gap(c.script, c.estimator).gamma);
  return c;
}

}  // namespace rbsim
