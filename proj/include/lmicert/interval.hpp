#pragma once

#include "lmicert/matrix.hpp"
#include "lmicert/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lmicert {

// Closed interval with exact rational endpoints.
class Interval {
 public:
  Interval() = default;
  Interval(int v) : lo_(v), hi_(v) {}
  Interval(const Rational& v) : lo_(v), hi_(v) {}
  Interval(const Rational& lo, const Rational& hi);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational mid() const { return (lo_ + hi_) / 2; }
  Rational width() const { return hi_ - lo_; }
  Rational rad() const { return (hi_ - lo_) / 2; }
  Rational mag() const;  // max |x|

  bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool interior_contains(const Interval& o) const { return lo_ < o.lo_ && o.hi_ < hi_; }
  bool contains_zero() const { return lo_ <= 0 && 0 <= hi_; }
  bool is_point() const { return lo_ == hi_; }

  // Outward rounding to the dyadic grid 2^-bits.
  Interval rounded(unsigned bits) const;

  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);

  bool operator==(const Interval& o) const { return lo_ == o.lo_ && hi_ == o.hi_; }

 private:
  Rational lo_ = 0, hi_ = 0;
};

Interval operator+(Interval a, const Interval& b);
Interval operator-(Interval a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(Interval a, const Interval& b);
// Throws if b contains zero.
Interval operator/(const Interval& a, const Interval& b);
Interval pow(const Interval& a, unsigned k);
Interval hull(const Interval& a, const Interval& b);
std::optional<Interval> intersect(const Interval& a, const Interval& b);

std::string to_string(const Interval& x);

using Box = std::vector<Interval>;
using IntervalMatrix = Matrix<Interval>;

// Rational bounds with lower^2 <= x <= upper^2.
Rational sqrt_lower(const Rational& x);
Rational sqrt_upper(const Rational& x);

// Rigorous upper bound on ||A - mid(A)||_2 via the Frobenius norm of the radius matrix.
Rational radius_norm_bound(const IntervalMatrix& a);
MatQ midpoint(const IntervalMatrix& a);

// Rigorous lower bound on lambda_min over every symmetric matrix in the interval matrix,
// or nullopt when no positive bound is established.
std::optional<Rational> psd_margin(const IntervalMatrix& a);

}  // namespace lmicert
