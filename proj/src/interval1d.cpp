#include "wavemodel/interval1d.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace wavemodel::interval1d {

namespace {

std::string pretty(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
  return format_rational(r);
}

void check_same_ambient(const IntervalSet& a, const IntervalSet& b) {
  if (a.length() != b.length()) {
    throw AmbientMismatch("interval sets on [0, " + pretty(a.length()) + "] and [0, " + pretty(b.length()) + "]");
  }
}

// Lower endpoint order: smaller value first, closed before open.
bool lower_before(const Endpoint& a, const Endpoint& b) {
  if (a.value != b.value) return a.value < b.value;
  return a.closed && !b.closed;
}

// The larger of two upper endpoints (closed wins a tie).
Endpoint upper_max(const Endpoint& a, const Endpoint& b) {
  if (a.value != b.value) return a.value < b.value ? b : a;
  return {a.value, a.closed || b.closed};
}

Endpoint upper_min(const Endpoint& a, const Endpoint& b) {
  if (a.value != b.value) return a.value < b.value ? a : b;
  return {a.value, a.closed && b.closed};
}

Endpoint lower_max(const Endpoint& a, const Endpoint& b) {
  if (a.value != b.value) return a.value < b.value ? b : a;
  return {a.value, a.closed && b.closed};
}

}  // namespace

bool Interval::contains(const Rational& y) const {
  const bool above = lo.closed ? y >= lo.value : y > lo.value;
  const bool below = hi.closed ? y <= hi.value : y < hi.value;
  return above && below;
}

// ---------------------------------------------------------------------------
// IntervalSet

IntervalSet::IntervalSet(Rational length) : length_(std::move(length)) {
  if (length_ <= 0) throw std::invalid_argument("ambient length must be positive");
}

IntervalSet::IntervalSet(Rational length, std::vector<Interval> components) : IntervalSet(std::move(length)) {
  std::vector<Interval> parts;
  parts.reserve(components.size());
  for (auto& c : components) {
    if (c.lo.value < 0 || c.hi.value > length_) {
      throw std::invalid_argument("interval endpoints must lie in [0, " + pretty(length_) + "]");
    }
    if (!c.empty()) parts.push_back(std::move(c));
  }
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return lower_before(a.lo, b.lo); });
  for (auto& part : parts) {
    if (!components_.empty()) {
      Interval& cur = components_.back();
      const bool touching = part.lo.value < cur.hi.value ||
                            (part.lo.value == cur.hi.value && (part.lo.closed || cur.hi.closed));
      if (touching) {
        cur.hi = upper_max(cur.hi, part.hi);
        continue;
      }
    }
    components_.push_back(std::move(part));
  }
}

IntervalSet IntervalSet::whole(const Rational& length) { return make(length, 0, true, length, true); }

IntervalSet IntervalSet::make(const Rational& length, const Rational& lo, bool lo_closed, const Rational& hi,
                              bool hi_closed) {
  return IntervalSet(length, {Interval{{lo, lo_closed}, {hi, hi_closed}}});
}

IntervalSet IntervalSet::point(const Rational& length, const Rational& x) { return make(length, x, true, x, true); }

bool IntervalSet::contains(const Rational& y) const {
  return std::any_of(components_.begin(), components_.end(), [&](const Interval& c) { return c.contains(y); });
}

bool IntervalSet::is_subset_of(const IntervalSet& other) const { return iv_intersect(*this, other) == *this; }

std::string IntervalSet::to_string() const {
  if (components_.empty()) return "{}";
  std::ostringstream os;
  bool first = true;
  for (const auto& c : components_) {
    if (!first) os << " U ";
    first = false;
    if (c.lo.value == c.hi.value) {
      os << '{' << pretty(c.lo.value) << '}';
      continue;
    }
    os << (c.lo.closed ? '[' : '(') << pretty(c.lo.value) << ", " << pretty(c.hi.value) << (c.hi.closed ? ']' : ')');
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Set algebra and topology

IntervalSet iv_union(const IntervalSet& a, const IntervalSet& b) {
  check_same_ambient(a, b);
  std::vector<Interval> parts = a.components();
  parts.insert(parts.end(), b.components().begin(), b.components().end());
  return IntervalSet(a.length(), std::move(parts));
}

IntervalSet iv_intersect(const IntervalSet& a, const IntervalSet& b) {
  check_same_ambient(a, b);
  std::vector<Interval> parts;
  for (const auto& p : a.components()) {
    for (const auto& q : b.components()) {
      Interval meet{lower_max(p.lo, q.lo), upper_min(p.hi, q.hi)};
      if (!meet.empty()) parts.push_back(std::move(meet));
    }
  }
  return IntervalSet(a.length(), std::move(parts));
}

IntervalSet iv_interior(const IntervalSet& a) {
  std::vector<Interval> parts;
  for (const auto& c : a.components()) {
    Interval open = c;
    open.lo.closed = c.lo.closed && c.lo.value == 0;
    open.hi.closed = c.hi.closed && c.hi.value == a.length();
    // A single point has no interior, even at the ambient boundary.
    if (c.lo.value == c.hi.value) continue;
    parts.push_back(std::move(open));
  }
  return IntervalSet(a.length(), std::move(parts));
}

IntervalSet iv_closure(const IntervalSet& a) {
  std::vector<Interval> parts = a.components();
  for (auto& c : parts) {
    c.lo.closed = true;
    c.hi.closed = true;
  }
  return IntervalSet(a.length(), std::move(parts));
}

IntervalSet iv_neighborhood(const IntervalSet& a, const Rational& t) {
  if (t <= 0) throw std::invalid_argument("neighborhood radius must be positive");
  const Rational& length = a.length();
  std::vector<Interval> parts;
  for (const auto& c : a.components()) {
    const Rational lo = c.lo.value - t;
    const Rational hi = c.hi.value + t;
    Endpoint lower = lo < 0 ? Endpoint{0, true} : Endpoint{lo, false};
    Endpoint upper = hi > length ? Endpoint{length, true} : Endpoint{hi, false};
    parts.push_back({std::move(lower), std::move(upper)});
  }
  return IntervalSet(length, std::move(parts));
}

IntervalSet iv_reflect(const IntervalSet& a) {
  const Rational& length = a.length();
  std::vector<Interval> parts;
  for (const auto& c : a.components()) {
    parts.push_back({{length - c.hi.value, c.hi.closed}, {length - c.lo.value, c.lo.closed}});
  }
  return IntervalSet(length, std::move(parts));
}

IntervalSet iv_open_ball(const Rational& length, const Rational& x, const Rational& t) {
  return iv_neighborhood(IntervalSet::point(length, x), t);
}

IntervalSet iv_closed_ball(const Rational& length, const Rational& x, const Rational& t) {
  if (t <= 0) throw std::invalid_argument("ball radius must be positive");
  const Rational lo = x - t;
  const Rational hi = x + t;
  return IntervalSet::make(length, lo < 0 ? Rational(0) : lo, true, hi > length ? length : hi, true);
}

// ---------------------------------------------------------------------------
// Affine families and their limits

AffineFamily::AffineFamily(Rational length, std::vector<AffineInterval> components, Rational eps_max)
    : length_(std::move(length)), components_(std::move(components)), eps_max_(std::move(eps_max)) {
  if (length_ <= 0) throw std::invalid_argument("ambient length must be positive");
  if (eps_max_ <= 0) throw std::invalid_argument("parameter range must be positive");
  for (const auto& c : components_) {
    if (c.lo.slope > 0 || c.hi.slope < 0) {
      throw NonMonotoneFamily("family is not decreasing as eps decreases: lower slope " + pretty(c.lo.slope) +
                              ", upper slope " + pretty(c.hi.slope));
    }
  }
}

AffineFamily AffineFamily::left_of(const Rational& length, const Rational& x) {
  return AffineFamily(length, {AffineInterval{{x, -1, false}, {x, 0, false}}}, x > 0 ? x : Rational(1));
}

AffineFamily AffineFamily::right_of(const Rational& length, const Rational& x) {
  return AffineFamily(length, {AffineInterval{{x, 0, false}, {x, 1, false}}}, x < length ? length - x : Rational(1));
}

AffineFamily AffineFamily::constant(const IntervalSet& set) {
  std::vector<AffineInterval> parts;
  for (const auto& c : set.components()) {
    parts.push_back({{c.lo.value, 0, c.lo.closed}, {c.hi.value, 0, c.hi.closed}});
  }
  return AffineFamily(set.length(), std::move(parts), 1);
}

IntervalSet AffineFamily::at(const Rational& eps) const {
  if (eps <= 0 || eps > eps_max_) throw std::invalid_argument("parameter outside (0, eps_max]");
  std::vector<Interval> parts;
  for (const auto& c : components_) {
    Endpoint lo{c.lo.at(eps), c.lo.closed};
    Endpoint hi{c.hi.at(eps), c.hi.closed};
    lo = lower_max(lo, {0, true});
    hi = upper_min(hi, {length_, true});
    Interval clipped{lo, hi};
    if (!clipped.empty()) parts.push_back(std::move(clipped));
  }
  return IntervalSet(length_, std::move(parts));
}

AffineFamily AffineFamily::reflected() const {
  std::vector<AffineInterval> parts;
  for (const auto& c : components_) {
    parts.push_back({{length_ - c.hi.base, -c.hi.slope, c.hi.closed}, {length_ - c.lo.base, -c.lo.slope, c.lo.closed}});
  }
  return AffineFamily(length_, std::move(parts), eps_max_);
}

namespace {

// Limit of one affine interval as eps -> 0+, clipped to [0, L]. Endpoints that
// move keep approaching their limit from outside, so the limit is included.
std::optional<Interval> limit_interval(const AffineInterval& c, const Rational& length) {
  Endpoint lo{c.lo.base, c.lo.slope < 0 || c.lo.closed};
  Endpoint hi{c.hi.base, c.hi.slope > 0 || c.hi.closed};
  if (lo.value < 0) lo = {0, true};
  if (hi.value > length) hi = {length, true};
  Interval out{lo, hi};
  if (out.lo.value > length || out.hi.value < 0 || out.empty()) return std::nullopt;
  return out;
}

// Whether G_eps keeps a point of this component inside [0, L] for every
// small eps > 0.
bool persists(const AffineInterval& c, const Rational& length) {
  const bool lo_moving = c.lo.slope < 0;
  const bool hi_moving = c.hi.slope > 0;
  const Rational& lo = c.lo.base;
  const Rational& hi = c.hi.base;
  const bool inner = lo < hi || (lo == hi && (lo_moving || hi_moving || (c.lo.closed && c.hi.closed)));
  const bool above_zero = hi > 0 || (hi == 0 && (hi_moving || c.hi.closed));
  const bool below_end = lo < length || (lo == length && (lo_moving || c.lo.closed));
  return inner && above_zero && below_end;
}

}  // namespace

IntervalSet iv_family_meet(const AffineFamily& family) {
  std::vector<Interval> parts;
  for (const auto& c : family.components()) {
    if (auto limit = limit_interval(c, family.length())) parts.push_back(std::move(*limit));
  }
  return IntervalSet(family.length(), std::move(parts));
}

IntervalSet iv_net_limit(const AffineFamily& family, const Rational& t) {
  if (t <= 0) throw std::invalid_argument("neighborhood radius must be positive");
  // (G_eps)^t is again an affine family: every surviving component widens by t
  // with open ends.
  std::vector<AffineInterval> widened;
  for (const auto& c : family.components()) {
    if (!persists(c, family.length())) continue;
    widened.push_back({{c.lo.base - t, c.lo.slope, false}, {c.hi.base + t, c.hi.slope, false}});
  }
  const AffineFamily neighborhoods(family.length(), std::move(widened), family.eps_max());
  return iv_interior(iv_family_meet(neighborhoods));
}

// ---------------------------------------------------------------------------
// Piecewise lattice functions

PiecewiseLatticeFunction1D::PiecewiseLatticeFunction1D(Rational length, Rational center,
                                                       std::vector<std::pair<Rational, IntervalSet>> exceptions)
    : length_(std::move(length)), center_(std::move(center)), exceptions_(std::move(exceptions)) {
  if (length_ <= 0) throw std::invalid_argument("ambient length must be positive");
  if (center_ < 0 || center_ > length_) throw std::invalid_argument("center outside [0, L]");
  std::sort(exceptions_.begin(), exceptions_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < exceptions_.size(); ++i) {
    const auto& [t, set] = exceptions_[i];
    if (t <= 0) throw std::invalid_argument("exceptional time must be positive");
    if (i > 0 && exceptions_[i - 1].first == t) throw std::invalid_argument("duplicate exceptional time");
    if (set.length() != length_) throw AmbientMismatch("exception set on a different segment");
    if (!(iv_interior(set) == set)) {
      throw std::invalid_argument("exception at t = " + pretty(t) + " is not open: " + set.to_string());
    }
    if (!iv_open_ball(length_, center_, t).is_subset_of(set) || !set.is_subset_of(iv_closed_ball(length_, center_, t))) {
      throw std::invalid_argument("exception at t = " + pretty(t) + " breaks monotonicity: " + set.to_string() +
                                  " is not between the open and the closed ball");
    }
  }
}

IntervalSet PiecewiseLatticeFunction1D::base(const Rational& t) const { return iv_open_ball(length_, center_, t); }

IntervalSet PiecewiseLatticeFunction1D::operator()(const Rational& t) const {
  for (const auto& [when, set] : exceptions_) {
    if (when == t) return set;
  }
  return base(t);
}

IntervalSet PiecewiseLatticeFunction1D::nucleus() const {
  // Meet of the open balls B_eps(center) as eps -> 0.
  return iv_family_meet(AffineFamily(length_, {AffineInterval{{center_, -1, false}, {center_, 1, false}}}, 1));
}

IntervalSet PiecewiseLatticeFunction1D::nucleus_of_closures() const {
  return iv_family_meet(AffineFamily(length_, {AffineInterval{{center_, -1, true}, {center_, 1, true}}}, 1));
}

std::vector<Rational> PiecewiseLatticeFunction1D::critical_times() const {
  std::vector<Rational> out;
  for (const auto& e : exceptions_) out.push_back(e.first);
  if (center_ > 0) out.push_back(center_);
  if (length_ - center_ > 0) out.push_back(length_ - center_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Rational> probe_times(const std::vector<const PiecewiseLatticeFunction1D*>& functions,
                                  const std::vector<Rational>& extra) {
  std::vector<Rational> pts;
  for (const auto* f : functions) {
    for (auto& t : f->critical_times()) pts.push_back(std::move(t));
  }
  for (const auto& t : extra) {
    if (t > 0) pts.push_back(t);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.empty()) return {Rational(1)};
  std::vector<Rational> out{pts.front() / 2};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) out.push_back((pts[i - 1] + pts[i]) / 2);
    out.push_back(pts[i]);
  }
  out.push_back(pts.back() + 1);
  return out;
}

bool piecewise_leq(const PiecewiseLatticeFunction1D& f, const PiecewiseLatticeFunction1D& g,
                   const std::vector<Rational>& probes) {
  return std::all_of(probes.begin(), probes.end(), [&](const Rational& t) { return f(t).is_subset_of(g(t)); });
}

// ---------------------------------------------------------------------------
// The four-function example on [0, 1]

namespace {

PiecewiseLatticeFunction1D reflect(const PiecewiseLatticeFunction1D& f) {
  std::vector<std::pair<Rational, IntervalSet>> exceptions;
  for (const auto& [t, set] : f.exceptions()) exceptions.emplace_back(t, iv_reflect(set));
  return PiecewiseLatticeFunction1D(f.length(), f.length() - f.center(), std::move(exceptions));
}

}  // namespace

FourChain segment_example(const Rational& x) {
  if (x <= 0 || x >= 1) throw std::invalid_argument("segment example needs 0 < x < 1, got " + pretty(x));
  const Rational one(1);
  if (x > Rational(1, 2)) {
    FourChain mirror = segment_example(one - x);
    return {x,
            reflect(mirror.lower),
            reflect(mirror.first),
            reflect(mirror.second),
            reflect(mirror.upper),
            mirror.family_first.reflected(),
            mirror.family_second.reflected(),
            mirror.merged_exception};
  }
  using Exceptions = std::vector<std::pair<Rational, IntervalSet>>;
  const IntervalSet omega = IntervalSet::whole(one);
  const Rational two_x = 2 * x;
  const Rational far = one - x;
  Exceptions first;
  Exceptions second;
  Exceptions upper;
  const bool merged = x == Rational(1, 2);
  if (merged) {
    // t = x = 1 - x: the two exceptional times collapse into one.
    first = {{x, IntervalSet::make(one, 0, true, one, false)}};
    second = {{x, IntervalSet::make(one, 0, false, one, true)}};
    upper = {{x, omega}};
  } else {
    first = {{x, IntervalSet::make(one, 0, true, two_x, false)}, {far, IntervalSet::make(one, 0, true, one, false)}};
    second = {{x, IntervalSet::make(one, 0, false, two_x, false)}, {far, omega}};
    upper = {{x, IntervalSet::make(one, 0, true, two_x, false)}, {far, omega}};
  }
  return {x,
          PiecewiseLatticeFunction1D(one, x),
          PiecewiseLatticeFunction1D(one, x, std::move(first)),
          PiecewiseLatticeFunction1D(one, x, std::move(second)),
          PiecewiseLatticeFunction1D(one, x, std::move(upper)),
          AffineFamily::left_of(one, x),
          AffineFamily::right_of(one, x),
          merged};
}

bool FourChainReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ChainCheck& c) { return c.passed; });
}

FourChainReport verify_four_chain(const Rational& x) {
  const FourChain chain = segment_example(x);
  FourChainReport report;
  report.x = x;
  std::vector<Rational> extra;
  for (int k = 1; k <= 24; ++k) extra.emplace_back(k, 20);
  report.probes = probe_times({&chain.lower, &chain.first, &chain.second, &chain.upper}, extra);
  const auto& probes = report.probes;
  auto add = [&](std::string name, bool passed, std::string detail = {}) {
    report.checks.push_back({std::move(name), passed, std::move(detail)});
  };

  add("b_* <= a1 <= b^*", piecewise_leq(chain.lower, chain.first, probes) && piecewise_leq(chain.first, chain.upper, probes));
  add("b_* <= a2 <= b^*",
      piecewise_leq(chain.lower, chain.second, probes) && piecewise_leq(chain.second, chain.upper, probes));
  add("a1 and a2 incomparable",
      !piecewise_leq(chain.first, chain.second, probes) && !piecewise_leq(chain.second, chain.first, probes));

  auto limit_matches = [&](const AffineFamily& family, const PiecewiseLatticeFunction1D& f, std::string& detail) {
    for (const auto& t : probes) {
      const IntervalSet limit = iv_net_limit(family, t);
      if (!(limit == f(t))) {
        detail = "t = " + pretty(t) + ": limit " + limit.to_string() + " vs " + f(t).to_string();
        return false;
      }
    }
    return true;
  };
  std::string detail;
  bool ok = limit_matches(chain.family_first, chain.first, detail);
  add("net limit of first approximating family reproduces a1", ok, detail);
  detail.clear();
  ok = limit_matches(chain.family_second, chain.second, detail);
  add("net limit of second approximating family reproduces a2", ok, detail);

  const IntervalSet point = IntervalSet::point(1, x);
  bool nuclei = true;
  for (const auto* f : {&chain.lower, &chain.first, &chain.second, &chain.upper}) {
    nuclei = nuclei && f->nucleus() == point && f->nucleus_of_closures() == point;
  }
  add("all four nuclei equal {x}", nuclei, point.to_string());

  bool balls = true;
  for (const auto& t : probes) {
    balls = balls && chain.lower(t) == iv_open_ball(1, x, t) &&
            chain.upper(t) == iv_interior(iv_closed_ball(1, x, t));
  }
  add("b_* is the open ball and b^* the interior of the closed ball", balls);

  const std::vector<const PiecewiseLatticeFunction1D*> all{&chain.lower, &chain.first, &chain.second, &chain.upper};
  bool distinct = true;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const bool same = std::all_of(probes.begin(), probes.end(),
                                    [&](const Rational& t) { return (*all[i])(t) == (*all[j])(t); });
      distinct = distinct && !same;
    }
  }
  add("four distinct functions", distinct);

  bool not_lower = false;
  bool not_lower_second = false;
  for (const auto& t : probes) {
    not_lower = not_lower || !(iv_net_limit(chain.family_first, t) == chain.lower(t));
    not_lower_second = not_lower_second || !(iv_net_limit(chain.family_second, t) == chain.lower(t));
  }
  add("neither approximating family produces b_*", not_lower && not_lower_second);
  if (chain.merged_exception) add("exceptional times t = x and t = 1 - x merged", true);
  return report;
}

}  // namespace wavemodel::interval1d
