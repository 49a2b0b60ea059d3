#include "lmicert/interval.hpp"

#include "lmicert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lmicert {

Interval::Interval(const Rational& lo, const Rational& hi) : lo_(lo), hi_(hi) {
  if (lo_ > hi_) throw std::invalid_argument("interval lower end exceeds upper end");
}

Rational Interval::mag() const { return std::max(abs(lo_), abs(hi_)); }

Interval Interval::rounded(unsigned bits) const { return Interval(round_down(lo_, bits), round_up(hi_, bits)); }

Interval& Interval::operator+=(const Interval& o) {
  lo_ += o.lo_;
  hi_ += o.hi_;
  return *this;
}

Interval& Interval::operator-=(const Interval& o) {
  Rational lo = lo_ - o.hi_;
  hi_ -= o.lo_;
  lo_ = lo;
  return *this;
}

Interval& Interval::operator*=(const Interval& o) {
  if (is_point() && o.is_point()) {
    lo_ *= o.lo_;
    hi_ = lo_;
    return *this;
  }
  Rational a = lo_ * o.lo_, b = lo_ * o.hi_, c = hi_ * o.lo_, d = hi_ * o.hi_;
  lo_ = std::min({a, b, c, d});
  hi_ = std::max({a, b, c, d});
  return *this;
}

Interval operator+(Interval a, const Interval& b) { return a += b; }
Interval operator-(Interval a, const Interval& b) { return a -= b; }
Interval operator-(const Interval& a) { return Interval(-a.hi(), -a.lo()); }
Interval operator*(Interval a, const Interval& b) { return a *= b; }

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw std::domain_error("interval division by an interval containing zero");
  return a * Interval(1 / b.hi(), 1 / b.lo());
}

Interval pow(const Interval& a, unsigned k) {
  if (k == 0) return Interval(1);
  if (a.is_point()) {
    Rational p = 1;
    for (unsigned i = 0; i < k; ++i) p *= a.lo();
    return Interval(p);
  }
  Rational l = 1, h = 1;
  for (unsigned i = 0; i < k; ++i) {
    l *= a.lo();
    h *= a.hi();
  }
  if (k % 2 == 1) return Interval(l, h);
  if (a.contains_zero()) return Interval(0, std::max(l, h));
  return Interval(std::min(l, h), std::max(l, h));
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  Rational lo = std::max(a.lo(), b.lo()), hi = std::min(a.hi(), b.hi());
  if (lo > hi) return std::nullopt;
  return Interval(lo, hi);
}

std::string to_string(const Interval& x) { return "[" + to_string(x.lo()) + ", " + to_string(x.hi()) + "]"; }

namespace {

constexpr unsigned kSqrtBits = 80;

// One exact Newton step from a floating-point guess; (s + x/s)/2 >= sqrt(x) for any s > 0.
Rational newton_upper(const Rational& x) {
  Rational s = rationalize(std::sqrt(to_double(x)), 1000000000);
  if (s <= 0) s = Rational(1, 1000000000) * Rational(1, 1000000000);
  return round_up((s + x / s) / 2, kSqrtBits);
}

}  // namespace

Rational sqrt_lower(const Rational& x) {
  if (x <= 0) return 0;
  Rational lo = round_down(x / newton_upper(x), kSqrtBits);
  return lo > 0 ? lo : Rational(0);
}

Rational sqrt_upper(const Rational& x) {
  if (x <= 0) return 0;
  return newton_upper(x);
}

Rational radius_norm_bound(const IntervalMatrix& a) {
  Rational sq = 0;
  for (const auto& e : a.data()) {
    Rational r = e.rad();
    sq += r * r;
  }
  return sqrt_upper(sq);
}

MatQ midpoint(const IntervalMatrix& a) {
  MatQ m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j).mid();
  return m;
}

std::optional<Rational> psd_margin(const IntervalMatrix& a) {
  if (a.rows() == 0) return std::nullopt;
  MatQ mid = midpoint(a);
  // Symmetrize the midpoint; the asymmetric part is absorbed into the radius bound.
  MatQ sym(mid.rows(), mid.cols());
  Rational asym_sq = 0;
  for (std::size_t i = 0; i < mid.rows(); ++i)
    for (std::size_t j = 0; j < mid.cols(); ++j) {
      sym(i, j) = (mid(i, j) + mid(j, i)) / 2;
      Rational d = mid(i, j) - sym(i, j);
      asym_sq += d * d;
    }
  auto mu = exact_min_eig_lower_bound(sym);
  if (!mu) return std::nullopt;
  Rational margin = *mu - radius_norm_bound(a) - sqrt_upper(asym_sq);
  if (margin <= 0) return std::nullopt;
  return margin;
}

}  // namespace lmicert
