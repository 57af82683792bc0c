#pragma once

// Generators and independent oracles shared by the unit, property and
// acceptance tests. Oracles work from the raw distance matrix only.

#include "wavemodel/interval1d.hpp"
#include "wavemodel/lattice.hpp"
#include "wavemodel/metric_space.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

namespace wavemodel::testing {

using Rng = std::mt19937_64;

inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng) { return uniform_index(rng, 0, 1) == 1; }

/// Complete graph with integer weights in [1, max_weight], closed under
/// shortest paths. Exact.
inline FiniteMetricSpace random_graph_space(Rng& rng, std::size_t n, int max_weight = 10) {
  std::vector<WeightedEdge> edges;
  for (PointIndex i = 0; i < n; ++i) {
    for (PointIndex j = i + 1; j < n; ++j) {
      edges.push_back({i, j, Real(static_cast<int>(uniform_index(rng, 1, max_weight)))});
    }
  }
  return build_from_graph(edges, n);
}

/// Distinct integer points in [0, span]^dim. Distances are exact only when
/// the squared distance is a perfect square.
inline FiniteMetricSpace random_point_space(Rng& rng, std::size_t n, std::size_t dim, int span = 20) {
  std::set<std::vector<int>> seen;
  std::vector<std::vector<Rational>> coords;
  while (coords.size() < n) {
    std::vector<int> p(dim);
    for (auto& c : p) c = static_cast<int>(uniform_index(rng, 0, span));
    if (!seen.insert(p).second) continue;
    coords.emplace_back(p.begin(), p.end());
  }
  return build_from_points(coords);
}

/// One of the backend kinds, chosen at random.
inline FiniteMetricSpace random_space(Rng& rng, std::size_t max_n = 8) {
  const std::size_t n = uniform_index(rng, 1, max_n);
  switch (uniform_index(rng, 0, 3)) {
    case 0:
      return random_graph_space(rng, n);
    case 1:
      return random_point_space(rng, n, uniform_index(rng, 1, 3));
    case 2:
      return build_discrete(n);
    default:
      return build_segment_sample(std::max<std::size_t>(n, 2), Rational(static_cast<int>(uniform_index(rng, 1, 5))));
  }
}

inline PointSet random_subset(Rng& rng, std::size_t n, bool nonempty = false) {
  PointSet s(n);
  for (PointIndex i = 0; i < n; ++i) {
    if (coin(rng)) s.insert(i);
  }
  if (nonempty && s.empty()) s.insert(uniform_index(rng, 0, n - 1));
  return s;
}

/// A radius drawn from the distance values, their midpoints, or a nudge
/// around them, so boundary cases show up often.
inline Real random_radius(Rng& rng, const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  const Real& d = space.distance(uniform_index(rng, 0, n - 1), uniform_index(rng, 0, n - 1));
  const Real base = d.is_finite() && d > Real(0) ? d : Real(1);
  switch (uniform_index(rng, 0, 3)) {
    case 0:
      return base;
    case 1:
      return Rational(1, 2) * base;
    case 2:
      return Rational(3, 2) * base;
    default:
      return base + Real(Rational(static_cast<int>(uniform_index(rng, 1, 9)), 10));
  }
}

// -- oracles ------------------------------------------------------------------

/// Metric axioms checked directly on the matrix.
inline bool satisfies_metric_axioms(const FiniteMetricSpace& s) {
  const Tolerance& tol = s.tolerance();
  const std::size_t n = s.size();
  for (PointIndex i = 0; i < n; ++i) {
    if (!tol.equal(s.distance(i, i), 0)) return false;
    for (PointIndex j = 0; j < n; ++j) {
      if (!tol.equal(s.distance(i, j), s.distance(j, i))) return false;
      if (i != j && !tol.strictly_less(Real(0), s.distance(i, j))) return false;
      for (PointIndex k = 0; k < n; ++k) {
        if (tol.compare(s.distance(i, k), s.distance(i, j) + s.distance(j, k)) > 0) return false;
      }
    }
  }
  return true;
}

/// {y : exists a in A with d(y,a) < t}, by enumeration.
inline PointSet oracle_neighborhood(const FiniteMetricSpace& s, const PointSet& a, const Real& t) {
  PointSet out(s.size());
  for (PointIndex y = 0; y < s.size(); ++y) {
    for (PointIndex m : a.indices()) {
      if (s.tolerance().in_open(s.distance(y, m), t)) {
        out.insert(y);
        break;
      }
    }
  }
  return out;
}

/// sup{r + s : B_r(x) ∩ B_s(y) = ∅} - d(x, y) over an r,s grid made of every
/// distance value, every midpoint between consecutive distinct values, each
/// value plus `delta`, and one radius beyond the diameter.
inline Real brute_force_defect(const FiniteMetricSpace& s, PointIndex x, PointIndex y, const Rational& delta) {
  if (x == y) return Real(0);
  std::vector<Rational> values;
  for (PointIndex i = 0; i < s.size(); ++i) {
    for (PointIndex j = 0; j < s.size(); ++j) values.push_back(s.distance(i, j).exact());
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<Rational> radii;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] > 0) radii.push_back(values[k]);
    radii.push_back(values[k] + delta);
    if (k + 1 < values.size()) radii.push_back((values[k] + values[k + 1]) / 2);
  }
  radii.push_back(values.back() * 2 + 1);
  bool found = false;
  Rational best = 0;
  for (const auto& r : radii) {
    for (const auto& q : radii) {
      bool meet = false;
      for (PointIndex z = 0; z < s.size() && !meet; ++z) {
        meet = s.distance(x, z).exact() < r && s.distance(y, z).exact() < q;
      }
      if (!meet && (!found || r + q > best)) {
        best = r + q;
        found = true;
      }
    }
  }
  return found ? Real(best - s.distance(x, y).exact()) : Real(0) - s.distance(x, y);
}

/// First multiple k*h (k >= 1) at which the open balls of radius k*h about x
/// and y share a point; tau lies in [2(k-1)h, 2kh).
inline Rational brute_force_tau_upper(const FiniteMetricSpace& s, PointIndex x, PointIndex y, const Rational& h) {
  for (Rational t = h;; t += h) {
    for (PointIndex z = 0; z < s.size(); ++z) {
      if (s.tolerance().in_open(s.distance(x, z), Real(t)) && s.tolerance().in_open(s.distance(y, z), Real(t))) {
        return t * 2;
      }
    }
  }
}

/// Checks a computed net limit against the family sampled at
/// eps = eps_max * 2^-k, k <= depth. S = ∩_k (G_eps_k)^t contains the true
/// meet and shrinks onto it, so the limit must lie inside S, S must lie
/// within delta of the limit, and each endpoint e of the limit is closed
/// exactly when e is 0 or L and e belongs to every sampled neighborhood.
inline bool net_limit_matches_samples(const interval1d::AffineFamily& family, const Rational& t,
                                      const interval1d::IntervalSet& limit, int depth = 30) {
  using namespace interval1d;
  IntervalSet sampled = IntervalSet::whole(family.length());
  Rational eps = family.eps_max();
  Rational steepest = 0;
  for (const auto& c : family.components()) {
    steepest = std::max({steepest, Rational(abs(c.lo.slope)), Rational(abs(c.hi.slope))});
  }
  for (int k = 0; k <= depth; ++k, eps /= 2) sampled = iv_intersect(sampled, iv_neighborhood(family.at(eps), t));
  const Rational delta = eps * 2 * (steepest + 1);
  if (!limit.is_subset_of(sampled)) return false;
  if (limit.empty()) return sampled.empty();
  if (!sampled.is_subset_of(iv_neighborhood(limit, delta))) return false;
  const Rational& length = family.length();
  for (const auto& c : limit.components()) {
    for (const auto& e : {c.lo, c.hi}) {
      const bool expect = (e.value == 0 || e.value == length) && sampled.contains(e.value);
      if (e.closed != expect) return false;
    }
  }
  return true;
}

/// Random IntervalSet on [0, L] with endpoints on the lattice L*k/den.
inline interval1d::IntervalSet random_interval_set(Rng& rng, const Rational& length, int den = 12) {
  using namespace interval1d;
  std::vector<Interval> parts;
  const std::size_t count = uniform_index(rng, 0, 3);
  for (std::size_t c = 0; c < count; ++c) {
    int a = static_cast<int>(uniform_index(rng, 0, den));
    int b = static_cast<int>(uniform_index(rng, 0, den));
    if (a > b) std::swap(a, b);
    Interval iv{{length * Rational(a, den), coin(rng)}, {length * Rational(b, den), coin(rng)}};
    if (a == b) iv.lo.closed = iv.hi.closed = true;
    parts.push_back(iv);
  }
  return IntervalSet(length, parts);
}

/// Membership of y in the union of raw (possibly overlapping) intervals.
inline bool raw_contains(const std::vector<interval1d::Interval>& parts, const Rational& y) {
  for (const auto& p : parts) {
    const bool above = p.lo.closed ? y >= p.lo.value : y > p.lo.value;
    const bool below = p.hi.closed ? y <= p.hi.value : y < p.hi.value;
    if (above && below) return true;
  }
  return false;
}

/// Test points: every endpoint, midpoints between consecutive endpoints, 0, L.
inline std::vector<Rational> witness_points(const std::vector<interval1d::IntervalSet>& sets, const Rational& length) {
  std::vector<Rational> pts{0, length};
  for (const auto& s : sets) {
    for (const auto& c : s.components()) {
      pts.push_back(c.lo.value);
      pts.push_back(c.hi.value);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t m = pts.size();
  for (std::size_t i = 0; i + 1 < m; ++i) pts.push_back((pts[i] + pts[i + 1]) / 2);
  return pts;
}

/// The two atoms of the order segment on [0, 1] written out case by case for
/// 0 < x <= 1/2, as independent expectations.
inline interval1d::IntervalSet expected_a1(const Rational& x, const Rational& t) {
  using namespace interval1d;
  const Rational one(1);
  if (t == x) return IntervalSet::make(one, 0, true, 2 * x, false);
  if (t == 1 - x && t != x) return IntervalSet::make(one, 0, true, 1, false);
  if (t > 1 - x) return IntervalSet::whole(one);
  return iv_open_ball(one, x, t);
}

inline interval1d::IntervalSet expected_a2(const Rational& x, const Rational& t) {
  using namespace interval1d;
  const Rational one(1);
  if (t >= 1 - x) return IntervalSet::whole(one);
  if (t == x) return IntervalSet::make(one, 0, false, 2 * x, false);
  return iv_open_ball(one, x, t);
}

}  // namespace wavemodel::testing
