#include "lmicert/upoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace lmicert {

UPoly::UPoly(std::vector<Rational> ascending) : c_(std::move(ascending)) { trim(); }

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational UPoly::operator()(const Rational& t) const {
  Rational acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * t + c_[i];
  return acc;
}

double UPoly::operator()(double t) const {
  double acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * t + to_double(c_[i]);
  return acc;
}

Interval UPoly::operator()(const Interval& t) const {
  if (t.is_point()) return Interval((*this)(t.lo()));
  Interval acc(0);
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * t + Interval(c_[i]);
  return acc;
}

UPoly UPoly::derivative() const {
  std::vector<Rational> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long>(i));
  return UPoly(d);
}

UPoly UPoly::monic() const { return is_zero() ? *this : *this * (1 / leading()); }

UPoly UPoly::operator+(const UPoly& o) const {
  std::vector<Rational> s(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = coeff(i) + o.coeff(i);
  return UPoly(s);
}

UPoly UPoly::operator-(const UPoly& o) const {
  std::vector<Rational> s(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = coeff(i) - o.coeff(i);
  return UPoly(s);
}

UPoly UPoly::operator*(const UPoly& o) const {
  if (is_zero() || o.is_zero()) return UPoly();
  std::vector<Rational> p(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) p[i + j] += c_[i] * o.c_[j];
  return UPoly(p);
}

UPoly UPoly::operator*(const Rational& c) const {
  std::vector<Rational> p = c_;
  for (auto& v : p) v *= c;
  return UPoly(p);
}

std::string UPoly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::string s;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    Rational mag = abs(c_[i]);
    if (s.empty())
      s += c_[i] < 0 ? "-" : "";
    else
      s += c_[i] < 0 ? " - " : " + ";
    if (mag != 1 || i == 0) s += lmicert::to_string(mag) + (i ? "*" : "");
    if (i >= 1) s += var;
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> r = a.coeffs();
  int db = b.degree();
  if (a.degree() < db) return {UPoly(), a};
  std::vector<Rational> q(static_cast<std::size_t>(a.degree() - db + 1));
  Rational lead = b.leading();
  for (int k = a.degree() - db; k >= 0; --k) {
    Rational f = r[static_cast<std::size_t>(k + db)] / lead;
    q[static_cast<std::size_t>(k)] = f;
    if (f == 0) continue;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(k + j)] -= f * b.coeff(static_cast<std::size_t>(j));
  }
  return {UPoly(q), UPoly(r)};
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a, y = b;
  while (!y.is_zero()) {
    UPoly r = divmod(x, y).second;
    x = y;
    y = r.monic();
  }
  return x.monic();
}

UPoly squarefree_part(const UPoly& p) {
  if (p.degree() <= 0) return p;
  UPoly g = gcd(p, p.derivative());
  return divmod(p, g).first.monic();
}

std::vector<UPoly> sturm_sequence(const UPoly& p) {
  std::vector<UPoly> s{p, p.derivative()};
  while (!s.back().is_zero()) {
    UPoly r = divmod(s[s.size() - 2], s.back()).second;
    if (r.is_zero()) break;
    s.push_back(r * Rational(-1));
  }
  if (s.back().is_zero()) s.pop_back();
  return s;
}

namespace {

std::size_t sign_changes(const std::vector<UPoly>& s, const Rational& t) {
  std::size_t changes = 0;
  int prev = 0;
  for (const auto& p : s) {
    int sg = sgn(p(t));
    if (sg == 0) continue;
    if (prev != 0 && sg != prev) ++changes;
    prev = sg;
  }
  return changes;
}

}  // namespace

std::size_t count_roots(const std::vector<UPoly>& sturm, const Rational& a, const Rational& b) {
  if (sturm.empty()) throw std::invalid_argument("Sturm sequence of the zero polynomial");
  std::size_t va = sign_changes(sturm, a), vb = sign_changes(sturm, b);
  return va >= vb ? va - vb : 0;
}

Rational root_bound(const UPoly& p) {
  if (p.degree() <= 0) return 1;
  Rational m = 0;
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, Rational(abs(p.coeff(static_cast<std::size_t>(i)) / p.leading())));
  return m + 1;
}

std::size_t count_real_roots(const UPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("zero polynomial has infinitely many roots");
  if (p.degree() == 0) return 0;
  UPoly sf = squarefree_part(p);
  Rational b = root_bound(sf);
  return count_roots(sturm_sequence(sf), -b, b);
}

std::vector<Interval> isolate_real_roots(const UPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("zero polynomial has infinitely many roots");
  std::vector<Interval> out;
  if (p.degree() == 0) return out;
  UPoly sf = squarefree_part(p);
  auto sturm = sturm_sequence(sf);
  Rational b = root_bound(sf);
  // Work list of half-open intervals (lo, hi] with known root counts.
  struct Piece {
    Rational lo, hi;
    std::size_t count;
  };
  std::vector<Piece> stack{{-b, b, count_roots(sturm, -b, b)}};
  while (!stack.empty()) {
    Piece pc = stack.back();
    stack.pop_back();
    if (pc.count == 0) continue;
    if (pc.count == 1) {
      if (sf(pc.hi) == 0) {
        out.emplace_back(pc.hi);
        continue;
      }
      // A root sitting on lo belongs to the neighbouring piece; split until lo is clear of it.
      if (sf(pc.lo) != 0) {
        out.emplace_back(pc.lo, pc.hi);
        continue;
      }
    }
    Rational mid = (pc.lo + pc.hi) / 2;
    std::size_t left = count_roots(sturm, pc.lo, mid);
    stack.push_back({mid, pc.hi, pc.count - left});
    stack.push_back({pc.lo, mid, left});
  }
  std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) { return x.lo() < y.lo(); });
  return out;
}

Interval refine_root(const UPoly& p, Interval iv, const Rational& w) {
  if (iv.is_point()) return iv;
  UPoly sf = squarefree_part(p);
  Rational lo = iv.lo(), hi = iv.hi();
  int slo = sgn(sf(lo));
  if (slo == 0) return Interval(lo);
  while (hi - lo > w) {
    Rational mid = (lo + hi) / 2;
    int sm = sgn(sf(mid));
    if (sm == 0) return Interval(mid);
    if (sm == slo)
      lo = mid;
    else
      hi = mid;
  }
  return Interval(lo, hi);
}

}  // namespace lmicert
