#pragma once

#include "wavemodel/rational.hpp"
#include "wavemodel/real.hpp"

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wavemodel {

using PointIndex = std::size_t;

/// A subset of the points {0, ..., n-1} of a finite space.
///
/// Finite spaces carry the discrete topology, so every PointSet is both open
/// and closed; interior and closure are the identity.
class PointSet {
 public:
  explicit PointSet(std::size_t universe_size = 0) : bits_(universe_size) {}
  PointSet(std::size_t universe_size, std::initializer_list<PointIndex> members);
  PointSet(std::size_t universe_size, const std::vector<PointIndex>& members);

  static PointSet full(std::size_t universe_size);

  std::size_t universe_size() const { return bits_.size(); }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  bool contains(PointIndex i) const { return i < bits_.size() && bits_.test(i); }
  void insert(PointIndex i);

  std::vector<PointIndex> indices() const;

  bool is_subset_of(const PointSet& other) const;
  bool intersects(const PointSet& other) const;

  PointSet& operator|=(const PointSet& other);
  PointSet& operator&=(const PointSet& other);
  friend PointSet operator|(PointSet a, const PointSet& b) { return a |= b; }
  friend PointSet operator&(PointSet a, const PointSet& b) { return a &= b; }
  friend bool operator==(const PointSet& a, const PointSet& b) { return a.bits_ == b.bits_; }

  /// "{0,3,4}"
  std::string to_string() const;

 private:
  void check_universe(const PointSet& other) const;
  boost::dynamic_bitset<> bits_;
};

/// A strictly positive radius (t, r, s in the neighborhood operator).
class Radius {
 public:
  explicit Radius(Real value);
  Radius(const Rational& value) : Radius(Real(value)) {}  // NOLINT implicit
  const Real& value() const { return value_; }

 private:
  Real value_;
};

/// Thrown when a distance matrix violates a metric axiom. `witness` holds the
/// offending index, pair or triple.
class MetricAxiomError : public std::runtime_error {
 public:
  enum class Kind { NonzeroDiagonal, Asymmetric, NonPositive, Triangle, Shape };
  MetricAxiomError(Kind kind, std::vector<PointIndex> witness, const std::string& what)
      : std::runtime_error(what), kind_(kind), witness_(std::move(witness)) {}
  Kind kind() const { return kind_; }
  const std::vector<PointIndex>& witness() const { return witness_; }

 private:
  Kind kind_;
  std::vector<PointIndex> witness_;
};

/// n labeled points with a validated distance matrix. Immutable after
/// construction; every backend reduces to this type.
class FiniteMetricSpace {
 public:
  /// `dist` is row-major n*n. Throws MetricAxiomError on any violation, with
  /// comparisons governed by `tolerance`.
  FiniteMetricSpace(std::vector<std::string> labels, std::vector<Real> dist, Tolerance tolerance = {});

  std::size_t size() const { return n_; }
  const std::string& label(PointIndex i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Real& distance(PointIndex i, PointIndex j) const { return dist_[i * n_ + j]; }
  const Tolerance& tolerance() const { return tolerance_; }

  /// True when every entry is an exact rational.
  bool is_exact() const { return exact_; }
  /// Largest distance; 0 for a single point.
  const Real& diameter() const { return diameter_; }
  /// Smallest off-diagonal distance; infinity for a single point.
  const Real& min_positive_distance() const { return min_positive_; }

  PointSet all() const { return PointSet::full(n_); }
  PointSet none() const { return PointSet(n_); }
  void check_index(PointIndex i) const;

 private:
  std::size_t n_;
  std::vector<std::string> labels_;
  std::vector<Real> dist_;
  Tolerance tolerance_;
  bool exact_ = true;
  Real diameter_{0};
  Real min_positive_ = Real::infinity();
};

/// Euclidean distances between rational coordinate vectors. A distance is
/// kept exact when the squared distance is the square of a rational.
FiniteMetricSpace build_from_points(const std::vector<std::vector<Rational>>& coords,
                                    std::vector<std::string> labels = {}, Tolerance tolerance = {});

struct WeightedEdge {
  PointIndex from;
  PointIndex to;
  Real weight;
};

/// Shortest-path (geodesic) metric of a connected weighted graph. `n` = 0
/// means one more than the largest endpoint index.
FiniteMetricSpace build_from_graph(const std::vector<WeightedEdge>& edges, std::size_t n = 0,
                                   std::vector<std::string> labels = {}, Tolerance tolerance = {});

FiniteMetricSpace build_discrete(std::size_t n);

/// `samples` equally spaced points of [0, length], exact.
FiniteMetricSpace build_segment_sample(std::size_t samples, const Rational& length = 1);

FiniteMetricSpace build_from_matrix(const std::vector<std::vector<Real>>& rows,
                                    std::vector<std::string> labels = {}, Tolerance tolerance = {});

/// d(x, A) = min over a in A of d(x, a); infinity for the empty set.
Real set_distance(const FiniteMetricSpace& space, PointIndex x, const PointSet& set);

/// A^t = {x : d(x, A) < t}. The empty set maps to itself.
PointSet neighborhood(const FiniteMetricSpace& space, const PointSet& set, const Radius& t);

PointSet open_ball(const FiniteMetricSpace& space, PointIndex center, const Radius& r);
PointSet closed_ball(const FiniteMetricSpace& space, PointIndex center, const Radius& r);

/// sup{r + s : B_r(x) and B_s(y) disjoint} - d(x, y), with the empty sup
/// taken as 0 and defect(x, x) = 0. Non-positive for every pair iff the
/// disjoint-balls condition holds.
Real condition2_defect(const FiniteMetricSpace& space, PointIndex x, PointIndex y);

/// All pairwise defects, row-major n*n. Shares the per-point distance order.
std::vector<Real> condition2_defects(const FiniteMetricSpace& space);

struct Condition1Report {
  bool holds = true;
  std::string note;
};

/// Compactness of closed balls. Always holds for finite spaces; exists so that
/// reports cite both conditions.
Condition1Report check_condition1(const FiniteMetricSpace& space);

struct SemigroupSides {
  PointSet iterated;  // (A^r)^s
  PointSet combined;  // A^{r+s}
};

/// Both sides of (A^r)^s = A^{r+s}. iterated is always a subset of combined.
SemigroupSides semigroup_defect(const FiniteMetricSpace& space, const PointSet& set, const Radius& r,
                                const Radius& s);

/// 2 * inf{t : B_t(x) and B_t(y) intersect} = 2 * min_z max(d(x,z), d(y,z)).
Real wave_distance_points(const FiniteMetricSpace& space, PointIndex x, PointIndex y);

}  // namespace wavemodel
