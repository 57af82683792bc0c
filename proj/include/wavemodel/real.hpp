#pragma once

#include "wavemodel/rational.hpp"

#include <iosfwd>
#include <string>

namespace wavemodel {

/// A distance-like value: an exact rational when the producing backend is
/// exact, otherwise a double. Also carries a distinguished +infinity used as
/// d(x, {}) and as an unbounded bracket end.
///
/// Arithmetic stays exact while every operand is exact. The raw ordering
/// (operator<) is exact between exact values and double-based otherwise; use
/// Tolerance for boundary-sensitive comparisons.
class Real {
 public:
  Real() = default;
  Real(Rational value);  // NOLINT implicit
  Real(int value) : Real(Rational(value)) {}  // NOLINT implicit

  static Real approx(double value);
  static Real infinity();

  bool is_exact() const { return kind_ == Kind::Exact; }
  bool is_infinite() const { return kind_ == Kind::Infinite; }
  bool is_finite() const { return kind_ != Kind::Infinite; }

  /// Requires is_exact().
  const Rational& exact() const;
  double to_double() const { return approx_; }

  /// Exact values print as "p/q", approximate ones as shortest round-trip
  /// decimal, infinity as "inf".
  std::string to_string() const;

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Rational& k, const Real& a);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  Real abs() const;

  /// Structural equality: exact/exact compares rationals, otherwise doubles.
  friend bool operator==(const Real& a, const Real& b);
  friend bool operator<(const Real& a, const Real& b);
  friend bool operator>(const Real& a, const Real& b) { return b < a; }
  friend bool operator<=(const Real& a, const Real& b) { return !(b < a); }
  friend bool operator>=(const Real& a, const Real& b) { return !(a < b); }

 private:
  enum class Kind { Exact, Approx, Infinite };
  Rational exact_{0};
  // For exact values, the nearest double; used to short-circuit comparisons.
  double approx_ = 0.0;
  Kind kind_ = Kind::Exact;
};

std::ostream& operator<<(std::ostream& os, const Real& value);

const Real& min(const Real& a, const Real& b);
const Real& max(const Real& a, const Real& b);

/// Boundary semantics for comparisons involving floating distances.
///
/// Between two exact values every predicate is exact. If either side is a
/// double, values within `eta` of each other count as equal, and a point
/// within eta of an open-ball boundary counts as inside.
struct Tolerance {
  double eta = 1e-9;

  /// -1, 0, +1 with eta-equality when either side is inexact.
  int compare(const Real& a, const Real& b) const;
  bool equal(const Real& a, const Real& b) const { return compare(a, b) == 0; }
  /// a < b by more than eta (exact: a < b).
  bool strictly_less(const Real& a, const Real& b) const { return compare(a, b) < 0; }

  /// Membership d < t for open balls and metric neighborhoods.
  bool in_open(const Real& d, const Real& t) const;
  /// Membership d <= t for closed balls.
  bool in_closed(const Real& d, const Real& t) const;
};

}  // namespace wavemodel
