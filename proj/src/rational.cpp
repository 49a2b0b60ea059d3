#include "lmicert/rational.hpp"

#include <mpfr.h>

#include <cmath>
#include <stdexcept>

namespace lmicert {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  if (!all_digits(num)) throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  if (slash != std::string_view::npos) {
    std::string_view den = body.substr(slash + 1);
    if (!all_digits(den)) throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    if (den.find_first_not_of('0') == std::string_view::npos)
      throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  }
  std::string s(text);
  if (s.front() == '+') s.erase(0, 1);
  Rational q(s, 10);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational exact_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite double has no rational value");
  Rational q(x);
  q.canonicalize();
  return q;
}

double to_double(const Rational& q) {
  mpfr_t t;
  mpfr_init2(t, 53);
  mpfr_set_q(t, q.get_mpq_t(), MPFR_RNDN);
  double d = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return d;
}

std::vector<double> to_double(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(to_double(q));
  return out;
}

Rational rationalize(const Rational& x, const Integer& max_den) {
  if (max_den < 1) throw std::invalid_argument("denominator bound must be positive");
  if (x.get_den() <= max_den) return x;
  // Convergents p0/q0, p1/q1 and the best semiconvergent within the bound.
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Integer n = x.get_num(), d = x.get_den();
  while (true) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    Integer q2 = q0 + a * q1;
    if (q2 > max_den) break;
    Integer p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    Integer rem = n - a * d;
    n = d;
    d = rem;
    if (d == 0) break;
  }
  Integer k = (max_den - q0) / q1;
  Rational bound1(p0 + k * p1, q0 + k * q1);
  Rational bound2(p1, q1);
  bound1.canonicalize();
  bound2.canonicalize();
  return abs(bound2 - x) <= abs(bound1 - x) ? bound2 : bound1;
}

Rational rationalize(double x, std::int64_t max_den) {
  return rationalize(exact_from_double(x), Integer(static_cast<long>(max_den)));
}

Rational round_down(const Rational& x, unsigned bits) {
  Integer scale = 1;
  scale <<= bits;
  Integer scaled_num = x.get_num() * scale;
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), scaled_num.get_mpz_t(), x.get_den().get_mpz_t());
  Rational r(fl, scale);
  r.canonicalize();
  return r;
}

Rational round_up(const Rational& x, unsigned bits) {
  Integer scale = 1;
  scale <<= bits;
  Integer scaled_num = x.get_num() * scale;
  Integer cl;
  mpz_cdiv_q(cl.get_mpz_t(), scaled_num.get_mpz_t(), x.get_den().get_mpz_t());
  Rational r(cl, scale);
  r.canonicalize();
  return r;
}

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace lmicert
