#include "lmicert/rur.hpp"

#include "lmicert/linalg.hpp"

#include <cctype>
#include <memory>
#include <sstream>

namespace lmicert {

namespace {

// Nested bracket lists of numbers and quoted names.
struct Node {
  enum class Type { Number, Name, List } type = Type::List;
  std::string text;
  std::vector<Node> items;
  std::size_t offset = 0;
};

class ListParser {
 public:
  explicit ListParser(const std::string& s) : s_(s) {}

  Node parse_document() {
    skip();
    Node n = value();
    skip();
    if (peek() != ':') throw RurParseError(pos_, "expected ':' after the top-level list");
    ++pos_;
    skip();
    if (pos_ != s_.size()) throw RurParseError(pos_, "trailing characters");
    return n;
  }

 private:
  Node value() {
    skip();
    Node n;
    n.offset = pos_;
    if (pos_ >= s_.size()) throw RurParseError(pos_, "unexpected end of input");
    char c = s_[pos_];
    if (c == '[') {
      ++pos_;
      skip();
      if (peek() == ']') {
        ++pos_;
        return n;
      }
      while (true) {
        n.items.push_back(value());
        skip();
        if (pos_ >= s_.size()) throw RurParseError(pos_, "unexpected end of input inside a list");
        if (s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (s_[pos_] == ']') {
          ++pos_;
          break;
        }
        throw RurParseError(pos_, "expected ',' or ']'");
      }
      return n;
    }
    if (c == '\'' || c == '"') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < s_.size() && s_[pos_] != c) ++pos_;
      if (pos_ >= s_.size()) throw RurParseError(pos_, "unterminated name");
      n.type = Node::Type::Name;
      n.text = s_.substr(start, pos_ - start);
      ++pos_;
      return n;
    }
    if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      ++pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
      n.type = Node::Type::Number;
      n.text = s_.substr(start, pos_ - start);
      return n;
    }
    throw RurParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

const Node& list_of(const Node& n, std::size_t len, const char* what) {
  if (n.type != Node::Type::List) throw RurParseError(n.offset, std::string("expected a list for ") + what);
  if (len && n.items.size() != len)
    throw RurParseError(n.offset, std::string("wrong number of entries in ") + what);
  return n;
}

Rational number(const Node& n) {
  if (n.type != Node::Type::Number) throw RurParseError(n.offset, "expected a number");
  try {
    return parse_rational(n.text);
  } catch (const std::invalid_argument& e) {
    throw RurParseError(n.offset, e.what());
  }
}

long integer(const Node& n) {
  Rational q = number(n);
  if (q.get_den() != 1) throw RurParseError(n.offset, "expected an integer");
  return q.get_num().get_si();
}

UPoly upoly(const Node& n, const char* what) {
  list_of(n, 2, what);
  long deg = integer(n.items[0]);
  const Node& cs = list_of(n.items[1], 0, what);
  std::vector<Rational> c;
  for (const auto& it : cs.items) c.push_back(number(it));
  if (static_cast<long>(c.size()) != deg + 1)
    throw RurParseError(n.offset, std::string("degree does not match coefficient count in ") + what);
  return UPoly(c);
}

void write_upoly(std::ostringstream& out, const UPoly& p) {
  out << "[" << p.degree() << ", [";
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) out << (i ? ", " : "") << to_string(p.coeffs()[i]);
  out << "]]";
}

}  // namespace

Rur parse_rur(const std::string& text) {
  Node doc = ListParser(text).parse_document();
  list_of(doc, 0, "the document");
  if (doc.items.empty()) throw RurParseError(doc.offset, "empty document");
  long flag = integer(doc.items[0]);
  Rur rur;
  if (flag == -1) {
    rur.kind = Rur::Kind::Empty;
    return rur;
  }
  if (flag == 1) {
    rur.kind = Rur::Kind::PositiveDimensional;
    return rur;
  }
  if (flag != 0) throw RurParseError(doc.items[0].offset, "unknown dimension flag");
  if (doc.items.size() != 2) throw RurParseError(doc.offset, "expected [0, [...]]");
  const Node& body = list_of(doc.items[1], 6, "the parametrization");
  if (integer(body.items[0]) != 0) throw RurParseError(body.items[0].offset, "only characteristic 0 is supported");
  long nvars = integer(body.items[1]);
  long deg = integer(body.items[2]);
  const Node& names = list_of(body.items[3], static_cast<std::size_t>(nvars), "the variable names");
  for (const auto& nm : names.items) {
    if (nm.type != Node::Type::Name) throw RurParseError(nm.offset, "expected a quoted variable name");
    rur.var_names.push_back(nm.text);
  }
  const Node& lf = list_of(body.items[4], 0, "the linear form");
  for (const auto& c : lf.items) rur.linear_form.push_back(number(c));
  const Node& polys = list_of(body.items[5], 3, "the polynomial block");
  rur.q = upoly(polys.items[0], "q");
  rur.q0 = upoly(polys.items[1], "q0");
  if (rur.q.degree() != deg) throw RurParseError(polys.items[0].offset, "degree of q differs from the header");
  const Node& params = list_of(polys.items[2], static_cast<std::size_t>(nvars), "the parametrizations");
  for (const auto& pr : params.items) {
    list_of(pr, 2, "a parametrization");
    UPoly num = upoly(pr.items[0], "a numerator");
    if (num.degree() > rur.q.degree()) throw RurParseError(pr.offset, "numerator degree exceeds deg q");
    Rational den = number(pr.items[1]);
    if (den == 0) throw RurParseError(pr.items[1].offset, "zero divisor");
    rur.numerators.push_back(num);
    rur.divisors.push_back(den);
  }
  if (rur.q.is_zero()) throw RurParseError(polys.items[0].offset, "q is the zero polynomial");
  return rur;
}

std::string format_rur(const Rur& rur) {
  std::ostringstream out;
  if (rur.kind == Rur::Kind::Empty) return "[-1]:\n";
  if (rur.kind == Rur::Kind::PositiveDimensional) return "[1, [0]]:\n";
  out << "[0, [0, " << rur.var_names.size() << ", " << rur.q.degree() << ", [";
  for (std::size_t i = 0; i < rur.var_names.size(); ++i) out << (i ? ", " : "") << "'" << rur.var_names[i] << "'";
  out << "], [";
  for (std::size_t i = 0; i < rur.linear_form.size(); ++i) out << (i ? ", " : "") << to_string(rur.linear_form[i]);
  out << "],\n[";
  write_upoly(out, rur.q);
  out << ",\n";
  write_upoly(out, rur.q0);
  out << ",\n[";
  for (std::size_t i = 0; i < rur.numerators.size(); ++i) {
    out << (i ? ",\n" : "") << "[";
    write_upoly(out, rur.numerators[i]);
    out << ", " << to_string(rur.divisors[i]) << "]";
  }
  out << "]]]]:\n";
  return out.str();
}

RurPoints rur_real_points(const Rur& rur, const Rational& width) {
  if (rur.kind != Rur::Kind::ZeroDimensional) throw std::invalid_argument("RUR does not describe a finite set");
  if (rur.q.is_zero()) throw std::invalid_argument("q is the zero polynomial");
  RurPoints out;
  UPoly q = rur.q;
  if (gcd(q, q.derivative()).degree() > 0) {
    q = squarefree_part(q);
    out.squarefree_taken = true;
  }
  for (Interval iv : isolate_real_roots(q)) {
    iv = refine_root(q, iv, width);
    Interval d = rur.q0(iv);
    Rational w = width;
    while (d.contains_zero()) {
      if (iv.is_point()) throw std::domain_error("q0 vanishes at a root of q");
      w /= 1024;
      iv = refine_root(q, iv, w);
      d = rur.q0(iv);
    }
    RurPoint pt;
    pt.t = iv;
    for (std::size_t i = 0; i < rur.numerators.size(); ++i)
      pt.coords.push_back(rur.numerators[i](iv) / (d * Interval(rur.divisors[i])));
    out.points.push_back(pt);
  }
  return out;
}

std::string to_string(PsdVerdict v) {
  switch (v) {
    case PsdVerdict::Accepted: return "accepted";
    case PsdVerdict::Rejected: return "rejected";
    default: return "undecided";
  }
}

PsdScreen psd_screen(const IntervalMatrix& x, const std::vector<std::size_t>& iota) {
  PsdScreen s;
  const std::size_t n = x.rows();
  for (std::size_t i = 0; i < n; ++i)
    if (x(i, i).hi() < 0) {
      s.verdict = PsdVerdict::Rejected;
      s.reason = "diagonal entry " + std::to_string(i + 1) + " is negative";
      return s;
    }
  MatQ mid = midpoint(x);
  SymEigen e = sym_eigen(to_double(mid));
  std::vector<Rational> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rationalize(e.vectors(i, n - 1), 1000000);
  Interval quad(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) quad += Interval(v[i] * v[j]) * x(i, j);
  if (quad.hi() < 0) {
    s.verdict = PsdVerdict::Rejected;
    s.reason = "Rayleigh quotient bound is negative";
    return s;
  }
  if (iota.empty()) {
    bool zero = true;
    for (const auto& entry : x.data()) zero = zero && entry.contains_zero();
    s.reason = zero ? "rank-0 chart: enclosure contains the zero matrix" : "rank-0 chart with a nonzero enclosure";
    if (zero) {
      s.verdict = PsdVerdict::Accepted;
      s.margin = Rational(0);
    }
    return s;
  }
  IntervalMatrix block(iota.size(), iota.size());
  for (std::size_t a = 0; a < iota.size(); ++a)
    for (std::size_t b = 0; b < iota.size(); ++b) block(a, b) = x(iota[a], iota[b]);
  if (auto m = psd_margin(block)) {
    s.verdict = PsdVerdict::Accepted;
    s.margin = m;
    s.reason = "principal block on the chart is positive definite";
    return s;
  }
  s.reason = "no eigenvalue bound of either sign established";
  return s;
}

}  // namespace lmicert
