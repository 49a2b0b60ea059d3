#pragma once

#include "lmicert/interval.hpp"
#include "lmicert/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lmicert {

using Exponent = std::vector<std::uint32_t>;

// a > b in degree-reverse-lexicographic order over the declared variable order.
bool grevlex_greater(const Exponent& a, const Exponent& b);

namespace detail {
inline double lift(const Rational& c, double) { return to_double(c); }
inline Rational lift(const Rational& c, const Rational&) { return c; }
inline Interval lift(const Rational& c, const Interval&) { return Interval(c); }
inline double power(double x, std::uint32_t k) {
  double p = 1;
  for (std::uint32_t i = 0; i < k; ++i) p *= x;
  return p;
}
inline Rational power(const Rational& x, std::uint32_t k) {
  Rational p = 1;
  for (std::uint32_t i = 0; i < k; ++i) p *= x;
  return p;
}
inline Interval power(const Interval& x, std::uint32_t k) { return pow(x, k); }
}  // namespace detail

// Sparse polynomial with rational coefficients over an ordered list of named variables.
class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  static MultiPoly constant(const std::vector<std::string>& vars, const Rational& c);
  static MultiPoly variable(const std::vector<std::string>& vars, std::size_t index);
  static MultiPoly variable(const std::vector<std::string>& vars, const std::string& name);

  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t nvars() const { return vars_.size(); }
  const std::map<Exponent, Rational>& terms() const { return terms_; }

  void add_term(const Exponent& e, const Rational& c);
  Rational coefficient(const Exponent& e) const;

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  int total_degree() const;  // -1 for the zero polynomial
  std::uint32_t degree_in(std::size_t var) const;
  bool is_linear() const { return total_degree() <= 1; }
  // Coefficient of x_var in a polynomial of degree <= 1.
  Rational linear_coefficient(std::size_t var) const;
  bool uses(std::size_t var) const { return degree_in(var) > 0; }

  MultiPoly derivative(std::size_t var) const;
  // Replace x_var by expr (over the same variables).
  MultiPoly substitute(std::size_t var, const MultiPoly& expr) const;
  MultiPoly substitute(std::size_t var, const Rational& value) const;
  // Re-express over another variable list, matching by name; throws if a used variable is absent.
  MultiPoly with_vars(const std::vector<std::string>& vars) const;
  // Divide by the leading coefficient in grevlex order.
  MultiPoly monic() const;
  // Multiply by the lcm of denominators divided by the gcd of numerators (sign kept).
  MultiPoly primitive() const;

  template <class T>
  T evaluate(const std::vector<T>& point) const {
    if (point.size() != vars_.size()) throw std::invalid_argument("evaluation point has wrong length");
    T acc = T(0);
    for (const auto& [e, c] : terms_) {
      T t = detail::lift(c, acc);
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i]) t = t * detail::power(point[i], e[i]);
      acc = acc + t;
    }
    return acc;
  }

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly operator*(const Rational& c) const;
  MultiPoly operator-() const;
  bool operator==(const MultiPoly& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }

  // Terms in descending grevlex order; rational coefficients, '*' products and '^' powers.
  std::string to_string() const;

 private:
  void check_vars(const MultiPoly& o) const;
  std::vector<std::string> vars_;
  std::map<Exponent, Rational> terms_;
};

MultiPoly operator+(MultiPoly a, const MultiPoly& b);
MultiPoly operator-(MultiPoly a, const MultiPoly& b);

// Parses the to_string format (and integer-scaled exports) over the given variables.
MultiPoly parse_polynomial(const std::string& text, const std::vector<std::string>& vars);

struct PolySystem {
  std::vector<std::string> vars;
  std::vector<MultiPoly> polys;
  std::vector<std::string> labels;

  PolySystem() = default;
  explicit PolySystem(std::vector<std::string> v) : vars(std::move(v)) {}

  void add(const MultiPoly& p, const std::string& label);
  std::size_t size() const { return polys.size(); }
  bool square() const { return polys.size() == vars.size(); }

  template <class T>
  std::vector<T> evaluate(const std::vector<T>& point) const {
    std::vector<T> out;
    out.reserve(polys.size());
    for (const auto& p : polys) out.push_back(p.evaluate(point));
    return out;
  }
};

using PolyMatrix = std::vector<std::vector<MultiPoly>>;

PolyMatrix jacobian(const PolySystem& f);

template <class T>
std::vector<std::vector<T>> evaluate(const PolyMatrix& m, const std::vector<T>& point) {
  std::vector<std::vector<T>> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (const auto& p : m[i]) out[i].push_back(p.evaluate(point));
  return out;
}

struct PhiU {
  MultiPoly phi;
  std::vector<Rational> u;
};

// phi = sum a_i x_i and u in Z^{c+1}, all entries nonzero integers in [-99, 99].
PhiU random_phi_u(const std::vector<std::string>& vars, std::size_t c, std::uint64_t seed);

// f = 0, z^T J(phi, f) = 0, z^T u = 1 over (x, z_0..z_c).
PolySystem lagrange_system(const PolySystem& f, const MultiPoly& phi, const std::vector<Rational>& u);

// Names of the multiplier variables appended by lagrange_system.
std::vector<std::string> multiplier_names(const PolySystem& f);

}  // namespace lmicert
