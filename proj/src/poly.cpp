#include "lmicert/poly.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>
#include <stdexcept>

namespace lmicert {

bool grevlex_greater(const Exponent& a, const Exponent& b) {
  std::uint64_t da = 0, db = 0;
  for (auto e : a) da += e;
  for (auto e : b) db += e;
  if (da != db) return da > db;
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

MultiPoly MultiPoly::constant(const std::vector<std::string>& vars, const Rational& c) {
  MultiPoly p(vars);
  p.add_term(Exponent(vars.size(), 0), c);
  return p;
}

MultiPoly MultiPoly::variable(const std::vector<std::string>& vars, std::size_t index) {
  if (index >= vars.size()) throw std::out_of_range("variable index out of range");
  MultiPoly p(vars);
  Exponent e(vars.size(), 0);
  e[index] = 1;
  p.add_term(e, 1);
  return p;
}

MultiPoly MultiPoly::variable(const std::vector<std::string>& vars, const std::string& name) {
  auto it = std::find(vars.begin(), vars.end(), name);
  if (it == vars.end()) throw std::out_of_range("unknown variable '" + name + "'");
  return variable(vars, static_cast<std::size_t>(it - vars.begin()));
}

void MultiPoly::add_term(const Exponent& e, const Rational& c) {
  if (e.size() != vars_.size()) throw std::invalid_argument("exponent length differs from variable count");
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

Rational MultiPoly::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

bool MultiPoly::is_constant() const { return total_degree() <= 0; }

Rational MultiPoly::constant_term() const { return coefficient(Exponent(vars_.size(), 0)); }

int MultiPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (auto x : e) s += static_cast<int>(x);
    d = std::max(d, s);
  }
  return d;
}

std::uint32_t MultiPoly::degree_in(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

Rational MultiPoly::linear_coefficient(std::size_t var) const {
  Exponent e(vars_.size(), 0);
  e[var] = 1;
  return coefficient(e);
}

MultiPoly MultiPoly::derivative(std::size_t var) const {
  if (var >= vars_.size()) throw std::out_of_range("variable index out of range");
  MultiPoly d(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent f = e;
    --f[var];
    d.add_term(f, c * e[var]);
  }
  return d;
}

MultiPoly MultiPoly::substitute(std::size_t var, const MultiPoly& expr) const {
  check_vars(expr);
  MultiPoly out(vars_);
  std::vector<MultiPoly> powers{constant(vars_, 1)};
  for (const auto& [e, c] : terms_) {
    while (powers.size() <= e[var]) powers.push_back(powers.back() * expr);
    Exponent rest = e;
    rest[var] = 0;
    MultiPoly mono(vars_);
    mono.add_term(rest, c);
    out += mono * powers[e[var]];
  }
  return out;
}

MultiPoly MultiPoly::substitute(std::size_t var, const Rational& value) const {
  return substitute(var, constant(vars_, value));
}

MultiPoly MultiPoly::with_vars(const std::vector<std::string>& vars) const {
  std::vector<std::size_t> map(vars_.size(), vars.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = std::find(vars.begin(), vars.end(), vars_[i]);
    if (it != vars.end()) map[i] = static_cast<std::size_t>(it - vars.begin());
  }
  MultiPoly out(vars);
  for (const auto& [e, c] : terms_) {
    Exponent f(vars.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (map[i] == vars.size()) throw std::invalid_argument("variable '" + vars_[i] + "' missing from target list");
      f[map[i]] += e[i];
    }
    out.add_term(f, c);
  }
  return out;
}

MultiPoly MultiPoly::monic() const {
  if (terms_.empty()) return *this;
  const Exponent* lead = nullptr;
  for (const auto& [e, c] : terms_)
    if (!lead || grevlex_greater(e, *lead)) lead = &e;
  return *this * (1 / terms_.at(*lead));
}

MultiPoly MultiPoly::primitive() const {
  if (terms_.empty()) return *this;
  Integer l = 1, g = 0;
  for (const auto& [e, c] : terms_) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
  }
  Rational scale(l, g);
  scale.canonicalize();
  return *this * scale;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  check_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  check_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  check_vars(o);
  MultiPoly p(vars_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exponent e = e1;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
      p.add_term(e, c1 * c2);
    }
  return p;
}

MultiPoly MultiPoly::operator*(const Rational& c) const {
  MultiPoly p(vars_);
  if (c == 0) return p;
  for (const auto& [e, v] : terms_) p.terms_.emplace(e, v * c);
  return p;
}

MultiPoly MultiPoly::operator-() const { return *this * Rational(-1); }

MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

void MultiPoly::check_vars(const MultiPoly& o) const {
  if (vars_ != o.vars_) throw std::invalid_argument("polynomials over different variable lists");
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Exponent, Rational>> ts(terms_.begin(), terms_.end());
  std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) { return grevlex_greater(a.first, b.first); });
  std::string s;
  for (std::size_t t = 0; t < ts.size(); ++t) {
    const auto& [e, c] = ts[t];
    Rational mag = abs(c);
    if (t == 0)
      s += c < 0 ? "-" : "";
    else
      s += c < 0 ? "-" : "+";
    bool has_var = std::any_of(e.begin(), e.end(), [](auto x) { return x > 0; });
    bool first = true;
    if (mag != 1 || !has_var) {
      s += lmicert::to_string(mag);
      first = false;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!first) s += "*";
      s += vars_[i];
      if (e[i] > 1) s += "^" + std::to_string(e[i]);
      first = false;
    }
  }
  return s;
}

namespace {

class PolyParser {
 public:
  PolyParser(const std::string& text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  MultiPoly parse() {
    MultiPoly p(vars_);
    skip();
    if (pos_ == s_.size()) throw error("empty polynomial");
    bool first = true;
    while (pos_ < s_.size()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        throw error("expected '+' or '-'");
      }
      first = false;
      auto [e, c] = term();
      p.add_term(e, c * sign);
      skip();
    }
    return p;
  }

 private:
  std::pair<Exponent, Rational> term() {
    Exponent e(vars_.size(), 0);
    Rational c = 1;
    while (true) {
      skip();
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        c *= number();
      } else if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_') {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        auto it = std::find(vars_.begin(), vars_.end(), name);
        if (it == vars_.end()) throw error("unknown variable '" + name + "'");
        std::uint32_t k = 1;
        skip();
        if (peek() == '^') {
          ++pos_;
          skip();
          k = static_cast<std::uint32_t>(number().get_num().get_ui());
        }
        e[static_cast<std::size_t>(it - vars_.begin())] += k;
      } else {
        throw error("expected a number or variable");
      }
      skip();
      if (peek() != '*') break;
      ++pos_;
    }
    return {e, c};
  }

  Rational number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    try {
      return parse_rational(s_.substr(start, pos_ - start));
    } catch (const std::invalid_argument&) {
      throw error("malformed number");
    }
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  std::invalid_argument error(const std::string& what) const {
    return std::invalid_argument("polynomial parse error at offset " + std::to_string(pos_) + ": " + what);
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

MultiPoly parse_polynomial(const std::string& text, const std::vector<std::string>& vars) {
  return PolyParser(text, vars).parse();
}

void PolySystem::add(const MultiPoly& p, const std::string& label) {
  if (p.vars() != vars) throw std::invalid_argument("polynomial variables differ from the system's");
  polys.push_back(p);
  labels.push_back(label);
}

PolyMatrix jacobian(const PolySystem& f) {
  PolyMatrix j(f.polys.size());
  for (std::size_t i = 0; i < f.polys.size(); ++i)
    for (std::size_t v = 0; v < f.vars.size(); ++v) j[i].push_back(f.polys[i].derivative(v));
  return j;
}

PhiU random_phi_u(const std::vector<std::string>& vars, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-99, 98);
  auto draw = [&] {
    int v = dist(rng);
    return v >= 0 ? v + 1 : v;  // skips zero
  };
  PhiU out{MultiPoly(vars), {}};
  for (std::size_t i = 0; i < vars.size(); ++i) {
    Exponent e(vars.size(), 0);
    e[i] = 1;
    out.phi.add_term(e, draw());
  }
  for (std::size_t i = 0; i <= c; ++i) out.u.push_back(draw());
  return out;
}

std::vector<std::string> multiplier_names(const PolySystem& f) {
  std::string base = "z";
  auto clash = [&](const std::string& b) {
    for (const auto& v : f.vars)
      if (v.rfind(b, 0) == 0) return true;
    return false;
  };
  while (clash(base)) base += "z";
  std::vector<std::string> out;
  for (std::size_t i = 0; i <= f.polys.size(); ++i) out.push_back(base + std::to_string(i));
  return out;
}

PolySystem lagrange_system(const PolySystem& f, const MultiPoly& phi, const std::vector<Rational>& u) {
  const std::size_t c = f.polys.size(), n = f.vars.size();
  if (u.size() != c + 1) throw std::invalid_argument("u must have length c+1");
  if (std::all_of(u.begin(), u.end(), [](const Rational& x) { return x == 0; }))
    throw std::invalid_argument("u must be nonzero");
  if (!phi.is_linear()) throw std::invalid_argument("phi must be linear");
  if (phi.vars() != f.vars) throw std::invalid_argument("phi variables differ from the system's");

  std::vector<std::string> vars = f.vars;
  auto zn = multiplier_names(f);
  vars.insert(vars.end(), zn.begin(), zn.end());
  PolySystem out(vars);
  for (std::size_t i = 0; i < c; ++i) out.add(f.polys[i].with_vars(vars), f.labels[i]);

  std::vector<MultiPoly> rows{phi};
  for (const auto& p : f.polys) rows.push_back(p);
  std::vector<MultiPoly> z;
  for (std::size_t i = 0; i <= c; ++i) z.push_back(MultiPoly::variable(vars, n + i));
  for (std::size_t j = 0; j < n; ++j) {
    MultiPoly eq(vars);
    for (std::size_t i = 0; i <= c; ++i) eq += z[i] * rows[i].derivative(j).with_vars(vars);
    out.add(eq, "lagrange-row " + f.vars[j]);
  }
  MultiPoly norm = MultiPoly::constant(vars, -1);
  for (std::size_t i = 0; i <= c; ++i) norm += z[i] * u[i];
  out.add(norm, "normalization");
  return out;
}

}  // namespace lmicert
