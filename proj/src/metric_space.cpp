#include "wavemodel/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace wavemodel {

// ---------------------------------------------------------------------------
// PointSet

PointSet::PointSet(std::size_t universe_size, std::initializer_list<PointIndex> members)
    : bits_(universe_size) {
  for (PointIndex i : members) insert(i);
}

PointSet::PointSet(std::size_t universe_size, const std::vector<PointIndex>& members)
    : bits_(universe_size) {
  for (PointIndex i : members) insert(i);
}

PointSet PointSet::full(std::size_t universe_size) {
  PointSet s(universe_size);
  s.bits_.set();
  return s;
}

void PointSet::insert(PointIndex i) {
  if (i >= bits_.size()) {
    throw std::out_of_range("point index " + std::to_string(i) + " outside universe of size " +
                            std::to_string(bits_.size()));
  }
  bits_.set(i);
}

std::vector<PointIndex> PointSet::indices() const {
  std::vector<PointIndex> out;
  out.reserve(bits_.count());
  for (auto i = bits_.find_first(); i != boost::dynamic_bitset<>::npos; i = bits_.find_next(i)) {
    out.push_back(i);
  }
  return out;
}

void PointSet::check_universe(const PointSet& other) const {
  if (other.bits_.size() != bits_.size()) throw std::invalid_argument("point sets over different spaces");
}

bool PointSet::is_subset_of(const PointSet& other) const {
  check_universe(other);
  return bits_.is_subset_of(other.bits_);
}

bool PointSet::intersects(const PointSet& other) const {
  check_universe(other);
  return bits_.intersects(other.bits_);
}

PointSet& PointSet::operator|=(const PointSet& other) {
  check_universe(other);
  bits_ |= other.bits_;
  return *this;
}

PointSet& PointSet::operator&=(const PointSet& other) {
  check_universe(other);
  bits_ &= other.bits_;
  return *this;
}

std::string PointSet::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (PointIndex i : indices()) {
    if (!first) os << ',';
    os << i;
    first = false;
  }
  os << '}';
  return os.str();
}

Radius::Radius(Real value) : value_(std::move(value)) {
  if (!value_.is_finite() || value_.to_double() <= 0.0 || (value_.is_exact() && value_.exact() <= 0)) {
    throw std::invalid_argument("radius must be a positive finite number, got " + value_.to_string());
  }
}

// ---------------------------------------------------------------------------
// FiniteMetricSpace

namespace {

std::string pair_name(PointIndex i, PointIndex j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, std::vector<Real> dist,
                                     Tolerance tolerance)
    : n_(labels.size()), labels_(std::move(labels)), dist_(std::move(dist)), tolerance_(tolerance) {
  if (n_ == 0) throw MetricAxiomError(MetricAxiomError::Kind::Shape, {}, "metric space must have at least one point");
  if (dist_.size() != n_ * n_) {
    throw MetricAxiomError(MetricAxiomError::Kind::Shape, {},
                           "distance matrix has " + std::to_string(dist_.size()) + " entries, expected " +
                               std::to_string(n_ * n_));
  }
  const Tolerance& tol = tolerance_;
  for (PointIndex i = 0; i < n_; ++i) {
    for (PointIndex j = 0; j < n_; ++j) {
      const Real& d = distance(i, j);
      if (!d.is_finite()) {
        throw MetricAxiomError(MetricAxiomError::Kind::NonPositive, {i, j}, "infinite distance at " + pair_name(i, j));
      }
      exact_ = exact_ && d.is_exact();
      if (i == j) {
        if (!tol.equal(d, 0)) {
          throw MetricAxiomError(MetricAxiomError::Kind::NonzeroDiagonal, {i},
                                 "d(" + std::to_string(i) + ", " + std::to_string(i) + ") = " + d.to_string() + " is not 0");
        }
        continue;
      }
      if (tol.compare(d, 0) <= 0) {
        throw MetricAxiomError(MetricAxiomError::Kind::NonPositive, {i, j},
                               "d" + pair_name(i, j) + " = " + d.to_string() + " is not positive");
      }
      if (j > i && !tol.equal(d, distance(j, i))) {
        throw MetricAxiomError(MetricAxiomError::Kind::Asymmetric, {i, j},
                               "d" + pair_name(i, j) + " = " + d.to_string() + " differs from d" + pair_name(j, i) +
                                   " = " + distance(j, i).to_string());
      }
      diameter_ = max(diameter_, d);
      min_positive_ = min(min_positive_, d);
    }
  }
  // Triangle inequality; the double pass settles almost every triple.
  for (PointIndex i = 0; i < n_; ++i) {
    for (PointIndex j = 0; j < n_; ++j) {
      if (i == j) continue;
      const Real& dij = distance(i, j);
      for (PointIndex k = 0; k < n_; ++k) {
        if (k == i || k == j) continue;
        const Real& dik = distance(i, k);
        const double slack = dij.to_double() + distance(j, k).to_double() - dik.to_double();
        const double scale = std::max(1.0, dik.to_double());
        if (slack > 1e-9 * scale + tol.eta) continue;
        if (tol.compare(dik, dij + distance(j, k)) > 0) {
          throw MetricAxiomError(MetricAxiomError::Kind::Triangle, {i, j, k},
                                 "triangle inequality fails on (" + std::to_string(i) + ", " + std::to_string(j) +
                                     ", " + std::to_string(k) + "): d" + pair_name(i, k) + " = " + dik.to_string() +
                                     " > " + dij.to_string() + " + " + distance(j, k).to_string());
        }
      }
    }
  }
}

void FiniteMetricSpace::check_index(PointIndex i) const {
  if (i >= n_) {
    throw std::out_of_range("point index " + std::to_string(i) + " outside space of size " + std::to_string(n_));
  }
}

namespace {

std::vector<std::string> default_labels(std::vector<std::string> labels, std::size_t n) {
  if (labels.empty()) {
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != n) throw std::invalid_argument("label count does not match point count");
  return labels;
}

}  // namespace

FiniteMetricSpace build_from_points(const std::vector<std::vector<Rational>>& coords, std::vector<std::string> labels,
                                    Tolerance tolerance) {
  const std::size_t n = coords.size();
  if (n == 0) throw std::invalid_argument("point cloud is empty");
  const std::size_t dim = coords.front().size();
  if (dim == 0) throw std::invalid_argument("points must have at least one coordinate");
  for (std::size_t i = 0; i < n; ++i) {
    if (coords[i].size() != dim) {
      throw std::invalid_argument("dimension mismatch: point " + std::to_string(i) + " has " +
                                  std::to_string(coords[i].size()) + " coordinates, expected " + std::to_string(dim));
    }
  }
  std::vector<Real> dist(n * n, Real(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational squared = 0;
      for (std::size_t k = 0; k < dim; ++k) {
        const Rational delta = coords[i][k] - coords[j][k];
        squared += delta * delta;
      }
      if (squared == 0) {
        throw std::invalid_argument("duplicate points " + std::to_string(i) + " and " + std::to_string(j));
      }
      Rational root;
      Real d = exact_sqrt(squared, root) ? Real(root) : Real::approx(std::sqrt(to_double(squared)));
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }
  return FiniteMetricSpace(default_labels(std::move(labels), n), std::move(dist), tolerance);
}

FiniteMetricSpace build_from_graph(const std::vector<WeightedEdge>& edges, std::size_t n,
                                   std::vector<std::string> labels, Tolerance tolerance) {
  for (const auto& e : edges) n = std::max({n, e.from + 1, e.to + 1});
  if (n == 0) throw std::invalid_argument("graph has no vertices");
  std::vector<Real> dist(n * n, Real::infinity());
  for (std::size_t i = 0; i < n; ++i) dist[i * n + i] = Real(0);
  for (const auto& e : edges) {
    if (!e.weight.is_finite() || tolerance.compare(e.weight, 0) <= 0) {
      throw std::invalid_argument("edge (" + std::to_string(e.from) + ", " + std::to_string(e.to) +
                                  ") has nonpositive weight " + e.weight.to_string());
    }
    if (e.from == e.to) continue;
    Real& a = dist[e.from * n + e.to];
    a = min(a, e.weight);
    dist[e.to * n + e.from] = a;
  }
  // Floyd-Warshall
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const Real& dik = dist[i * n + k];
      if (dik.is_infinite()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const Real& dkj = dist[k * n + j];
        if (dkj.is_infinite()) continue;
        Real via = dik + dkj;
        if (via < dist[i * n + j]) dist[i * n + j] = std::move(via);
      }
    }
  }
  for (std::size_t j = 1; j < n; ++j) {
    if (dist[j].is_infinite()) {
      throw std::invalid_argument("graph is disconnected: vertex " + std::to_string(j) + " unreachable from 0");
    }
  }
  return FiniteMetricSpace(default_labels(std::move(labels), n), std::move(dist), tolerance);
}

FiniteMetricSpace build_discrete(std::size_t n) {
  if (n == 0) throw std::invalid_argument("discrete space needs at least one point");
  std::vector<Real> dist(n * n, Real(1));
  for (std::size_t i = 0; i < n; ++i) dist[i * n + i] = Real(0);
  return FiniteMetricSpace(default_labels({}, n), std::move(dist));
}

FiniteMetricSpace build_segment_sample(std::size_t samples, const Rational& length) {
  if (samples < 2) throw std::invalid_argument("segment sample needs at least two points");
  if (length <= 0) throw std::invalid_argument("segment length must be positive");
  const Rational step = length / Rational(samples - 1);
  std::vector<std::string> labels;
  labels.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) labels.push_back(format_rational(step * Rational(i)));
  std::vector<Real> dist(samples * samples, Real(0));
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t j = 0; j < samples; ++j) {
      dist[i * samples + j] = Real(step * Rational(i > j ? i - j : j - i));
    }
  }
  return FiniteMetricSpace(std::move(labels), std::move(dist));
}

FiniteMetricSpace build_from_matrix(const std::vector<std::vector<Real>>& rows, std::vector<std::string> labels,
                                    Tolerance tolerance) {
  const std::size_t n = rows.size();
  std::vector<Real> dist;
  dist.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw MetricAxiomError(MetricAxiomError::Kind::Shape, {i},
                             "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                 " entries, expected " + std::to_string(n));
    }
    dist.insert(dist.end(), rows[i].begin(), rows[i].end());
  }
  return FiniteMetricSpace(default_labels(std::move(labels), n), std::move(dist), tolerance);
}

// ---------------------------------------------------------------------------
// Neighborhoods and balls

Real set_distance(const FiniteMetricSpace& space, PointIndex x, const PointSet& set) {
  space.check_index(x);
  Real best = Real::infinity();
  for (PointIndex a : set.indices()) best = min(best, space.distance(x, a));
  return best;
}

PointSet neighborhood(const FiniteMetricSpace& space, const PointSet& set, const Radius& t) {
  if (set.universe_size() != space.size()) throw std::invalid_argument("point set does not belong to this space");
  PointSet out(space.size());
  if (set.empty()) return out;
  const auto members = set.indices();
  const Tolerance& tol = space.tolerance();
  for (PointIndex x = 0; x < space.size(); ++x) {
    for (PointIndex a : members) {
      if (tol.in_open(space.distance(x, a), t.value())) {
        out.insert(x);
        break;
      }
    }
  }
  return out;
}

PointSet open_ball(const FiniteMetricSpace& space, PointIndex center, const Radius& r) {
  space.check_index(center);
  return neighborhood(space, PointSet(space.size(), {center}), r);
}

PointSet closed_ball(const FiniteMetricSpace& space, PointIndex center, const Radius& r) {
  space.check_index(center);
  PointSet out(space.size());
  for (PointIndex y = 0; y < space.size(); ++y) {
    if (space.tolerance().in_closed(space.distance(center, y), r.value())) out.insert(y);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Condition 2

namespace {

std::vector<PointIndex> order_by_distance(const FiniteMetricSpace& space, PointIndex x) {
  std::vector<PointIndex> order(space.size());
  std::iota(order.begin(), order.end(), PointIndex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](PointIndex a, PointIndex b) { return space.distance(x, a) < space.distance(x, b); });
  return order;
}

// Sweep over candidate radii r = d(x, z). For r in (v_{k-1}, v_k] the ball
// B_r(x) is the set of points strictly closer than v_k, so the supremum over
// that range is v_k + min{d(y, z) : d(x, z) < v_k}. Only r <= d(x, y) keeps y
// outside B_r(x), which is needed for some s > 0 to exist.
Real defect_with_order(const FiniteMetricSpace& space, PointIndex x, PointIndex y,
                       const std::vector<PointIndex>& order_x) {
  if (x == y) return Real(0);
  const Tolerance& tol = space.tolerance();
  const Real& dxy = space.distance(x, y);
  Real best_sum(0);
  bool found = false;
  Real prefix_min = Real::infinity();
  std::size_t i = 0;
  const std::size_t n = order_x.size();
  while (i < n) {
    const Real& v = space.distance(x, order_x[i]);
    if (tol.compare(v, dxy) > 0) break;
    if (!prefix_min.is_infinite()) {
      Real candidate = v + prefix_min;
      if (!found || best_sum < candidate) best_sum = std::move(candidate);
      found = true;
    }
    // Absorb the whole group of radii equal to v into the prefix.
    std::size_t j = i;
    while (j < n && tol.equal(space.distance(x, order_x[j]), v)) {
      prefix_min = min(prefix_min, space.distance(y, order_x[j]));
      ++j;
    }
    i = j;
  }
  if (!found) return Real(0) - dxy;
  return best_sum - dxy;
}

}  // namespace

Real condition2_defect(const FiniteMetricSpace& space, PointIndex x, PointIndex y) {
  space.check_index(x);
  space.check_index(y);
  return defect_with_order(space, x, y, order_by_distance(space, x));
}

std::vector<Real> condition2_defects(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  std::vector<Real> out(n * n, Real(0));
  for (PointIndex x = 0; x < n; ++x) {
    const auto order = order_by_distance(space, x);
    for (PointIndex y = 0; y < n; ++y) out[x * n + y] = defect_with_order(space, x, y, order);
  }
  return out;
}

Condition1Report check_condition1(const FiniteMetricSpace& space) {
  return {true, "holds (finite space): every closed ball is a finite set of at most " +
                    std::to_string(space.size()) + " points, hence compact"};
}

SemigroupSides semigroup_defect(const FiniteMetricSpace& space, const PointSet& set, const Radius& r,
                                const Radius& s) {
  PointSet iterated = neighborhood(space, neighborhood(space, set, r), s);
  PointSet combined = neighborhood(space, set, Radius(r.value() + s.value()));
  return {std::move(iterated), std::move(combined)};
}

Real wave_distance_points(const FiniteMetricSpace& space, PointIndex x, PointIndex y) {
  space.check_index(x);
  space.check_index(y);
  if (x == y) return Real(0);
  Real best = Real::infinity();
  for (PointIndex z = 0; z < space.size(); ++z) {
    best = min(best, max(space.distance(x, z), space.distance(y, z)));
  }
  return Rational(2) * best;
}

}  // namespace wavemodel
