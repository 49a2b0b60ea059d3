#pragma once

#include "lmicert/interval.hpp"
#include "lmicert/rational.hpp"

#include <string>
#include <utility>
#include <vector>

namespace lmicert {

// Univariate polynomial over Q, coefficients in ascending degree, no trailing zeros.
class UPoly {
 public:
  UPoly() = default;
  UPoly(std::vector<Rational> ascending);
  static UPoly constant(const Rational& c) { return UPoly(std::vector<Rational>{c}); }
  static UPoly x() { return UPoly(std::vector<Rational>{0, 1}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational operator()(const Rational& t) const;
  double operator()(double t) const;
  // Horner form over an interval (an enclosure of the range).
  Interval operator()(const Interval& t) const;

  UPoly derivative() const;
  UPoly monic() const;

  UPoly operator+(const UPoly& o) const;
  UPoly operator-(const UPoly& o) const;
  UPoly operator*(const UPoly& o) const;
  UPoly operator*(const Rational& c) const;
  bool operator==(const UPoly& o) const { return c_ == o.c_; }

  std::string to_string(const std::string& var = "t") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

// Quotient and remainder; throws on division by zero.
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
// Monic gcd (zero when both are zero).
UPoly gcd(const UPoly& a, const UPoly& b);
UPoly squarefree_part(const UPoly& p);

std::vector<UPoly> sturm_sequence(const UPoly& p);
// Number of distinct real roots in (a, b] of a nonzero polynomial.
std::size_t count_roots(const std::vector<UPoly>& sturm, const Rational& a, const Rational& b);
std::size_t count_real_roots(const UPoly& p);
// Strict bound: all real roots lie in (-B, B).
Rational root_bound(const UPoly& p);

// Disjoint isolating intervals, ascending. A root met exactly by a bisection point comes back as
// a point interval; otherwise each open interval (lo, hi) holds exactly one root with p(lo) p(hi) < 0.
std::vector<Interval> isolate_real_roots(const UPoly& p);
// Bisects an isolating interval of a squarefree p until width <= w.
Interval refine_root(const UPoly& p, Interval iv, const Rational& w);

}  // namespace lmicert
