#include "rbsim/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rbsim/core_model.hpp"

namespace rbsim {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

Tick floor_div(Tick a, Tick b) {
  Tick q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Estimator Estimator::point_table(std::vector<Point> points) {
  for (const auto& p : points) {
    if (p.weight < Rational(0)) throw std::invalid_argument("point_table: negative weight at t=" + std::to_string(p.time));
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const Point& a, const Point& b) { return a.time < b.time; });
  Estimator e;
  e.kind_ = Kind::PointTable;
  e.points_.clear();
  for (const auto& p : points) {
    if (p.weight == Rational(0)) continue;
    if (!e.points_.empty() && e.points_.back().time == p.time) {
      e.points_.back().weight += p.weight;
    } else {
      e.points_.push_back(p);
    }
  }
  e.prefix_.assign(1, Rational(0));
  for (const auto& p : e.points_) e.prefix_.push_back(e.prefix_.back() + p.weight);
  return e;
}

Estimator Estimator::poisson_grid(Tick spacing) {
  if (spacing <= 0) throw std::invalid_argument("poisson_grid: spacing must be positive");
  Estimator e;
  e.kind_ = Kind::PoissonGrid;
  e.spacing_ = spacing;
  e.points_.clear();
  e.prefix_.clear();
  return e;
}

Rational Estimator::prefix_through(Tick t) const {
  if (kind_ == Kind::PoissonGrid) return Rational(floor_div(t, spacing_));
  auto it = std::upper_bound(points_.begin(), points_.end(), t,
                             [](Tick v, const Point& p) { return v < p.time; });
  return prefix_[static_cast<std::size_t>(it - points_.begin())];
}

Rational Estimator::estimate(Interval iv) const {
  if (iv.hi <= iv.lo) return Rational(0);
  return prefix_through(iv.hi) - prefix_through(iv.lo);
}

std::optional<Tick> Estimator::first_reach(Tick from, Rational amount) const {
  if (amount <= Rational(0)) return from + 1;
  if (kind_ == Kind::PoissonGrid) {
    std::int64_t need = amount.numerator() / amount.denominator();
    if (need * amount.denominator() < amount.numerator()) ++need;
    return (floor_div(from, spacing_) + need) * spacing_;
  }
  auto it = std::upper_bound(points_.begin(), points_.end(), from,
                             [](Tick v, const Point& p) { return v < p.time; });
  std::size_t k0 = static_cast<std::size_t>(it - points_.begin());
  Rational target = prefix_[k0] + amount;
  auto pit = std::lower_bound(prefix_.begin() + static_cast<std::ptrdiff_t>(k0) + 1, prefix_.end(), target);
  if (pit == prefix_.end()) return std::nullopt;
  std::size_t k = static_cast<std::size_t>(pit - prefix_.begin());
  return points_[k - 1].time;
}

std::vector<Estimator::Point> Estimator::masses_in(Tick lo, Tick hi) const {
  std::vector<Point> out;
  if (hi <= lo) return out;
  if (kind_ == Kind::PoissonGrid) {
    for (Tick k = floor_div(lo, spacing_) + 1; k * spacing_ <= hi; ++k) {
      out.push_back(Point{k * spacing_, Rational(1)});
    }
    return out;
  }
  auto it = std::upper_bound(points_.begin(), points_.end(), lo,
                             [](Tick v, const Point& p) { return v < p.time; });
  for (; it != points_.end() && it->time <= hi; ++it) out.push_back(*it);
  return out;
}

std::string Estimator::describe() const {
  if (kind_ == Kind::PoissonGrid) return "poisson_grid(spacing=" + std::to_string(spacing_) + ")";
  std::string s = "point_table([";
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i) s += ",";
    s += "(" + std::to_string(points_[i].time) + "," + to_string(points_[i].weight) + ")";
  }
  return s + "])";
}

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("estimator spec: " + what + " at offset " + std::to_string(pos) +
                                " in '" + std::string(text) + "'");
  }
  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool peek(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }
  void expect(std::string_view tok) {
    skip_ws();
    if (text.substr(pos, tok.size()) != tok) fail("expected '" + std::string(tok) + "'");
    pos += tok.size();
  }
  std::int64_t integer() {
    skip_ws();
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (ec != std::errc()) fail("expected integer");
    pos = static_cast<std::size_t>(ptr - text.data());
    return v;
  }
  Rational rational() {
    std::int64_t num = integer();
    if (peek('/')) {
      ++pos;
      std::int64_t den = integer();
      if (den == 0) fail("zero denominator");
      return Rational(num, den);
    }
    return Rational(num);
  }
  void end() {
    skip_ws();
    if (pos != text.size()) fail("trailing characters");
  }
};

}  // namespace

Estimator Estimator::parse(std::string_view text) {
  Cursor c{text};
  c.skip_ws();
  if (text.substr(c.pos).starts_with("poisson_grid")) {
    c.expect("poisson_grid");
    c.expect("(");
    c.expect("spacing");
    c.expect("=");
    Tick sp = c.integer();
    c.expect(")");
    c.end();
    return poisson_grid(sp);
  }
  c.expect("point_table");
  c.expect("(");
  c.expect("[");
  std::vector<Point> pts;
  if (!c.peek(']')) {
    while (true) {
      c.expect("(");
      Tick t = c.integer();
      c.expect(",");
      Rational w = c.rational();
      c.expect(")");
      pts.push_back(Point{t, w});
      if (!c.peek(',')) break;
      ++c.pos;
    }
  }
  c.expect("]");
  c.expect(")");
  c.end();
  return point_table(std::move(pts));
}

// ---- estimation gap -------------------------------------------------------

namespace {

using Wide = __int128;

// Masses are carried as integers over one common denominator `scale`.
struct Breakpoint {
  Tick time = 0;
  std::int64_t goods = 0;
  Wide mass = 0;
};

struct Breakpoints {
  std::vector<Breakpoint> pts;
  Wide scale = 1;
};

Breakpoints breakpoints(const EventScript& script, const Estimator& est) {
  std::vector<Tick> goods = good_times(script);
  Tick H = std::max(script.horizon, last_job_time(script));
  std::vector<Estimator::Point> masses = est.masses_in(0, H);
  Breakpoints out;
  std::int64_t scale = 1;
  for (const auto& m : masses) {
    std::int64_t d = m.weight.denominator();
    std::int64_t step = d / std::gcd(scale, d);
    if (scale > std::numeric_limits<std::int64_t>::max() / step) {
      throw std::overflow_error("estimation gap: estimator denominators overflow a common scale");
    }
    scale *= step;
  }
  out.scale = scale;
  std::size_t gi = 0, mi = 0;
  std::sort(goods.begin(), goods.end());
  while (gi < goods.size() && goods[gi] <= 0) ++gi;
  while (gi < goods.size() || mi < masses.size()) {
    Tick t = gi < goods.size() ? goods[gi] : masses[mi].time;
    if (mi < masses.size()) t = std::min(t, masses[mi].time);
    Breakpoint b{t, 0, 0};
    while (gi < goods.size() && goods[gi] == t) {
      ++b.goods;
      ++gi;
    }
    if (mi < masses.size() && masses[mi].time == t) {
      const Rational& w = masses[mi++].weight;
      b.mass = static_cast<Wide>(w.numerator()) * (scale / w.denominator());
    }
    out.pts.push_back(b);
  }
  return out;
}

// gamma satisfies both sides of the bound for an interval with good count G
// and estimate S / D.
bool holds(std::int64_t gamma, std::int64_t G, Wide S, Wide D) {
  Wide g = gamma;
  return g * S + g * g * D >= G * D && g * (G + 1) * D >= S;
}

std::int64_t minimal_gamma(std::int64_t G, Wide S, Wide D) {
  std::int64_t lo = 1;
  if (holds(lo, G, S, D)) return lo;
  std::int64_t hi = 2;
  while (!holds(hi, G, S, D)) hi *= 2;
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    (holds(mid, G, S, D) ? hi : lo) = mid;
  }
  return hi;
}

Interval span(const std::vector<Breakpoint>& bp, std::size_t i, std::size_t j) {
  return Interval{bp[i].time - 1, bp[j].time};
}

struct BestRange {
  Wide sum = 0;
  std::size_t i = 0, j = 0;
};

// Largest-sum contiguous range of value(k), k < n.
template <class F>
BestRange max_subarray(std::size_t n, F value) {
  BestRange best{value(0), 0, 0};
  Wide run = best.sum;
  std::size_t start = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (run < 0) {
      run = value(k);
      start = k;
    } else {
      run += value(k);
    }
    if (run > best.sum) best = BestRange{run, start, k};
  }
  return best;
}

// Returns an interval on which gamma fails, if any.
std::optional<Interval> violation(const Breakpoints& b, std::int64_t gamma) {
  const auto& bp = b.pts;
  if (bp.empty()) return std::nullopt;
  const Wide g = gamma, D = b.scale;
  BestRange over = max_subarray(bp.size(), [&](std::size_t k) { return bp[k].goods * D - g * bp[k].mass; });
  if (over.sum > g * g * D) return span(bp, over.i, over.j);
  BestRange under = max_subarray(bp.size(), [&](std::size_t k) { return bp[k].mass - g * bp[k].goods * D; });
  if (under.sum > g * D) return span(bp, under.i, under.j);
  return std::nullopt;
}

}  // namespace

GapReport gap_oracle(const EventScript& script, const Estimator& est, std::size_t job_cap) {
  if (static_cast<std::size_t>(job_count(script)) > job_cap) {
    throw std::length_error("gap_oracle: script holds " + std::to_string(job_count(script)) +
                            " jobs, cap is " + std::to_string(job_cap));
  }
  Breakpoints b = breakpoints(script, est);
  const auto& bp = b.pts;
  GapReport rep;
  for (std::size_t i = 0; i < bp.size(); ++i) {
    std::int64_t G = 0;
    Wide S = 0;
    for (std::size_t j = i; j < bp.size(); ++j) {
      G += bp[j].goods;
      S += bp[j].mass;
      if (holds(rep.gamma, G, S, b.scale)) continue;
      rep.gamma = minimal_gamma(G, S, b.scale);
      rep.witness = span(bp, i, j);
    }
  }
  return rep;
}

GapReport estimation_gap(const EventScript& script, const Estimator& est) {
  Breakpoints bp = breakpoints(script, est);
  GapReport rep;
  if (!violation(bp, 1)) return rep;
  std::int64_t lo = 1, hi = 2;
  while (violation(bp, hi)) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    (violation(bp, mid) ? lo : hi) = mid;
  }
  rep.gamma = hi;
  rep.witness = violation(bp, hi - 1);
  return rep;
}

}  // namespace rbsim
