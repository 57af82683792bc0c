#pragma once

#include "wavemodel/rational.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

/// Exact open-set arithmetic on the segment [0, L] with its relative
/// topology: 0 and L are interior points of any set containing [0, d) or
/// (L - d, L]. No floating point anywhere.
namespace wavemodel::interval1d {

struct Endpoint {
  Rational value;
  bool closed = false;
  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

struct Interval {
  Endpoint lo;
  Endpoint hi;
  bool empty() const { return lo.value > hi.value || (lo.value == hi.value && !(lo.closed && hi.closed)); }
  bool contains(const Rational& y) const;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of subintervals of [0, L] in canonical form: sorted, nonempty,
/// and separated by a nonempty gap. Equal sets have identical components.
class IntervalSet {
 public:
  explicit IntervalSet(Rational length);
  IntervalSet(Rational length, std::vector<Interval> components);

  static IntervalSet whole(const Rational& length);
  static IntervalSet make(const Rational& length, const Rational& lo, bool lo_closed, const Rational& hi,
                          bool hi_closed);
  static IntervalSet point(const Rational& length, const Rational& x);

  const Rational& length() const { return length_; }
  const std::vector<Interval>& components() const { return components_; }
  bool empty() const { return components_.empty(); }
  bool contains(const Rational& y) const;
  bool is_subset_of(const IntervalSet& other) const;

  /// "[0, 3/5) U (7/10, 1]", "{}" when empty, "{3/10}" for a point.
  std::string to_string() const;

  friend bool operator==(const IntervalSet& a, const IntervalSet& b) {
    return a.length_ == b.length_ && a.components_ == b.components_;
  }

 private:
  Rational length_;
  std::vector<Interval> components_;
};

class AmbientMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

IntervalSet iv_union(const IntervalSet& a, const IntervalSet& b);
IntervalSet iv_intersect(const IntervalSet& a, const IntervalSet& b);
IntervalSet iv_interior(const IntervalSet& a);
IntervalSet iv_closure(const IntervalSet& a);
/// A^t = {y in [0, L] : d(y, A) < t}; depends only on closure(A).
IntervalSet iv_neighborhood(const IntervalSet& a, const Rational& t);
/// Image under the isometry y -> L - y.
IntervalSet iv_reflect(const IntervalSet& a);

/// Open ball B_t(x) and closed ball B_t[x] inside [0, L].
IntervalSet iv_open_ball(const Rational& length, const Rational& x, const Rational& t);
IntervalSet iv_closed_ball(const Rational& length, const Rational& x, const Rational& t);

/// value(eps) = base + slope * eps.
struct AffineEndpoint {
  Rational base;
  Rational slope;
  bool closed = false;
  Rational at(const Rational& eps) const { return base + slope * eps; }
};

struct AffineInterval {
  AffineEndpoint lo;
  AffineEndpoint hi;
};

class NonMonotoneFamily : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// G_eps = union of affine intervals, for eps in (0, eps_max]. Must shrink as
/// eps decreases: lower slopes <= 0, upper slopes >= 0.
class AffineFamily {
 public:
  AffineFamily(Rational length, std::vector<AffineInterval> components, Rational eps_max);

  /// (x - eps, x)
  static AffineFamily left_of(const Rational& length, const Rational& x);
  /// (x, x + eps)
  static AffineFamily right_of(const Rational& length, const Rational& x);
  static AffineFamily constant(const IntervalSet& set);

  const Rational& length() const { return length_; }
  const std::vector<AffineInterval>& components() const { return components_; }
  const Rational& eps_max() const { return eps_max_; }
  IntervalSet at(const Rational& eps) const;
  AffineFamily reflected() const;

 private:
  Rational length_;
  std::vector<AffineInterval> components_;
  Rational eps_max_;
};

/// ∩_{eps>0} G_eps by endpoint limits: an endpoint that moves inward becomes
/// closed at its limit, a stationary endpoint keeps its flag.
IntervalSet iv_family_meet(const AffineFamily& family);

/// int ∩_{eps>0} (G_eps)^t, exactly.
IntervalSet iv_net_limit(const AffineFamily& family, const Rational& t);

/// t -> B_t(center) ∩ [0, L], overridden at finitely many exceptional t.
///
/// Monotone by construction: an override E at t* is accepted only when
/// B_{t*}(center) ⊆ E ⊆ B_{t*}[center], which are the left and right limits
/// of the base family.
class PiecewiseLatticeFunction1D {
 public:
  PiecewiseLatticeFunction1D(Rational length, Rational center,
                             std::vector<std::pair<Rational, IntervalSet>> exceptions = {});

  const Rational& length() const { return length_; }
  const Rational& center() const { return center_; }
  const std::vector<std::pair<Rational, IntervalSet>>& exceptions() const { return exceptions_; }

  IntervalSet operator()(const Rational& t) const;
  IntervalSet base(const Rational& t) const;

  /// ∩_{t>0} g(t); the exceptions sit at positive t and cannot affect it.
  IntervalSet nucleus() const;
  /// Same meet taken over closures.
  IntervalSet nucleus_of_closures() const;

  /// Values of t where the function or its base changes shape.
  std::vector<Rational> critical_times() const;

 private:
  Rational length_;
  Rational center_;
  std::vector<std::pair<Rational, IntervalSet>> exceptions_;
};

/// Probe times covering every critical time of the given functions, the
/// midpoints between them, and points beyond both ends.
std::vector<Rational> probe_times(const std::vector<const PiecewiseLatticeFunction1D*>& functions,
                                  const std::vector<Rational>& extra = {});

bool piecewise_leq(const PiecewiseLatticeFunction1D& f, const PiecewiseLatticeFunction1D& g,
                   const std::vector<Rational>& probes);

/// The four functions of the order segment [b_*[x], b^*[x]] on [0, 1].
/// family_first / family_second generate first / second by iv_net_limit:
/// (x - eps, x) and (x, x + eps) for x <= 1/2, swapped by reflection above.
struct FourChain {
  Rational x;
  PiecewiseLatticeFunction1D lower;   // b_*[x]
  PiecewiseLatticeFunction1D first;   // a^(1)
  PiecewiseLatticeFunction1D second;  // a^(2)
  PiecewiseLatticeFunction1D upper;   // b^*[x]
  AffineFamily family_first;
  AffineFamily family_second;
  bool merged_exception = false;      // x = 1/2: t = x and t = 1 - x coincide
};

FourChain segment_example(const Rational& x);

struct ChainCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct FourChainReport {
  Rational x;
  std::vector<Rational> probes;
  std::vector<ChainCheck> checks;
  bool all_passed() const;
};

FourChainReport verify_four_chain(const Rational& x);

}  // namespace wavemodel::interval1d
