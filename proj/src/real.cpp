#include "wavemodel/real.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace wavemodel {

Real::Real(Rational value)
    : exact_(std::move(value)), approx_(wavemodel::to_double(exact_)), kind_(Kind::Exact) {}

Real Real::approx(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("Real::approx requires a finite double");
  Real r;
  r.kind_ = Kind::Approx;
  r.approx_ = value;
  return r;
}

Real Real::infinity() {
  Real r;
  r.kind_ = Kind::Infinite;
  r.approx_ = std::numeric_limits<double>::infinity();
  return r;
}

const Rational& Real::exact() const {
  if (kind_ != Kind::Exact) throw std::logic_error("Real::exact on a non-exact value");
  return exact_;
}

std::string Real::to_string() const {
  switch (kind_) {
    case Kind::Exact: return format_rational(exact_);
    case Kind::Infinite: return "inf";
    case Kind::Approx: break;
  }
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << approx_;
  return os.str();
}

Real operator+(const Real& a, const Real& b) {
  if (a.is_infinite() || b.is_infinite()) return Real::infinity();
  if (a.is_exact() && b.is_exact()) return Real(a.exact_ + b.exact_);
  return Real::approx(a.to_double() + b.to_double());
}

Real operator-(const Real& a, const Real& b) {
  if (b.is_infinite()) throw std::domain_error("subtracting infinity");
  if (a.is_infinite()) return Real::infinity();
  if (a.is_exact() && b.is_exact()) return Real(a.exact_ - b.exact_);
  return Real::approx(a.to_double() - b.to_double());
}

Real operator*(const Rational& k, const Real& a) {
  if (a.is_infinite()) {
    if (k <= 0) throw std::domain_error("scaling infinity by a non-positive factor");
    return a;
  }
  if (a.is_exact()) return Real(k * a.exact_);
  return Real::approx(to_double(k) * a.approx_);
}

Real operator*(const Real& a, const Real& b) {
  if (a.is_infinite() || b.is_infinite()) throw std::domain_error("multiplying infinity");
  if (a.is_exact() && b.is_exact()) return Real(a.exact_ * b.exact_);
  return Real::approx(a.to_double() * b.to_double());
}

Real operator/(const Real& a, const Real& b) {
  if (a.is_infinite() || b.is_infinite()) throw std::domain_error("dividing with infinity");
  if (b.is_exact() && b.exact_ == 0) throw std::domain_error("division by zero");
  if (a.is_exact() && b.is_exact()) return Real(a.exact_ / b.exact_);
  return Real::approx(a.to_double() / b.to_double());
}

Real Real::abs() const {
  switch (kind_) {
    case Kind::Exact: return Real(exact_ < 0 ? Rational(-exact_) : exact_);
    case Kind::Approx: return Real::approx(std::fabs(approx_));
    case Kind::Infinite: return *this;
  }
  return *this;
}

bool operator==(const Real& a, const Real& b) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
  if (a.is_exact() && b.is_exact()) return a.exact_ == b.exact_;
  return a.to_double() == b.to_double();
}

namespace {

// True when the cached doubles are far enough apart that rounding cannot
// flip the order of the underlying rationals.
bool clearly_ordered(double a, double b) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) > 1e-12 * scale;
}

}  // namespace

bool operator<(const Real& a, const Real& b) {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  if (a.is_exact() && b.is_exact()) {
    if (clearly_ordered(a.approx_, b.approx_)) return a.approx_ < b.approx_;
    return a.exact_ < b.exact_;
  }
  return a.to_double() < b.to_double();
}

std::ostream& operator<<(std::ostream& os, const Real& value) { return os << value.to_string(); }

const Real& min(const Real& a, const Real& b) { return b < a ? b : a; }
const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }

int Tolerance::compare(const Real& a, const Real& b) const {
  if (a.is_infinite() || b.is_infinite()) {
    if (a.is_infinite() && b.is_infinite()) return 0;
    return a.is_infinite() ? 1 : -1;
  }
  if (a.is_exact() && b.is_exact()) {
    if (clearly_ordered(a.to_double(), b.to_double())) return a.to_double() < b.to_double() ? -1 : 1;
    if (a.exact() == b.exact()) return 0;
    return a.exact() < b.exact() ? -1 : 1;
  }
  const double diff = a.to_double() - b.to_double();
  if (std::fabs(diff) <= eta) return 0;
  return diff < 0 ? -1 : 1;
}

bool Tolerance::in_open(const Real& d, const Real& t) const {
  if (d.is_infinite()) return false;
  if (t.is_infinite()) return true;
  if (d.is_exact() && t.is_exact()) return d < t;
  return d.to_double() <= t.to_double() + eta;
}

bool Tolerance::in_closed(const Real& d, const Real& t) const {
  if (d.is_infinite()) return t.is_infinite();
  if (t.is_infinite()) return true;
  if (d.is_exact() && t.is_exact()) return d <= t;
  return d.to_double() <= t.to_double() + eta;
}

}  // namespace wavemodel
