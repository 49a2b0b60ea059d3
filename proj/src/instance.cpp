#include "lmicert/instance.hpp"

#include "lmicert/linalg.hpp"

#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

namespace lmicert {

void SdpInstance::validate() const {
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  if (A.empty()) throw std::invalid_argument("m must be >= 1");
  if (A.size() != b.size()) throw std::invalid_argument("constraint count differs from length of b");
  for (const auto& a : A)
    if (a.n() != n) throw std::invalid_argument("constraint matrix dimension differs from n");
  if (C && C->n() != n) throw std::invalid_argument("objective dimension differs from n");
}

bool SdpInstance::operator==(const SdpInstance& o) const {
  return name == o.name && n == o.n && A == o.A && b == o.b && C == o.C;
}

std::vector<Rational> apply_map(const SdpInstance& inst, const SymQ& x) {
  if (x.n() != inst.n) throw std::invalid_argument("dimension mismatch in apply_map");
  std::vector<Rational> out;
  for (const auto& a : inst.A) {
    Rational s = 0;
    for (std::size_t j = 0; j < inst.n; ++j)
      for (std::size_t i = j; i < inst.n; ++i) {
        if (a(i, j) == 0) continue;
        s += (i == j ? 1 : 2) * a(i, j) * x(i, j);
      }
    out.push_back(s);
  }
  return out;
}

std::vector<double> apply_map(const SdpInstance& inst, const SymD& x) {
  if (x.n() != inst.n) throw std::invalid_argument("dimension mismatch in apply_map");
  std::vector<double> out;
  for (const auto& a : inst.A) {
    double s = 0;
    for (std::size_t j = 0; j < inst.n; ++j)
      for (std::size_t i = j; i < inst.n; ++i) {
        if (a(i, j) == 0) continue;
        s += (i == j ? 1.0 : 2.0) * to_double(a(i, j)) * x(i, j);
      }
    out.push_back(s);
  }
  return out;
}

namespace {

std::size_t parse_index(const std::string& tok, std::size_t line) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(line, "expected a positive integer, got '" + tok + "'");
  return std::stoul(tok);
}

Rational parse_value(const std::string& tok, std::size_t line) {
  try {
    return parse_rational(tok);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace

SdpInstance parse_instance(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  std::optional<std::size_t> n, m;
  std::optional<std::vector<Rational>> b;
  std::string name;
  struct Entry {
    std::size_t k, i, j;
    Rational v;
    std::size_t line;
  };
  std::vector<Entry> entries, c_entries;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
    std::istringstream ls(body);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    if (key == "name") {
      if (tok.size() != 2) throw ParseError(lineno, "name takes one token");
      name = tok[1];
    } else if (key == "n" || key == "m") {
      if (tok.size() != 2) throw ParseError(lineno, key + " takes one integer");
      std::size_t v = parse_index(tok[1], lineno);
      (key == "n" ? n : m) = v;
    } else if (key == "b") {
      std::vector<Rational> v;
      for (std::size_t t = 1; t < tok.size(); ++t) v.push_back(parse_value(tok[t], lineno));
      b = v;
    } else if (key == "A") {
      if (tok.size() != 5) throw ParseError(lineno, "A entry needs k i j value");
      entries.push_back({parse_index(tok[1], lineno), parse_index(tok[2], lineno), parse_index(tok[3], lineno),
                         parse_value(tok[4], lineno), lineno});
    } else if (key == "C") {
      if (tok.size() != 4) throw ParseError(lineno, "C entry needs i j value");
      c_entries.push_back(
          {0, parse_index(tok[1], lineno), parse_index(tok[2], lineno), parse_value(tok[3], lineno), lineno});
    } else {
      throw ParseError(lineno, "unknown record '" + key + "'");
    }
  }
  ++lineno;
  if (!n) throw ParseError(lineno, "missing n");
  if (*n == 0) throw ParseError(lineno, "n must be >= 1");
  if (!m || *m == 0) throw ParseError(lineno, "m must be >= 1");
  if (!b) throw ParseError(lineno, "missing b");
  if (b->size() != *m) throw ParseError(lineno, "b has " + std::to_string(b->size()) + " entries, expected m");

  SdpInstance inst;
  inst.name = name;
  inst.n = *n;
  inst.b = *b;
  inst.A.assign(*m, SymQ(*n));
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
  auto place = [&](SymQ& target, const Entry& e, std::size_t k) {
    if (e.i < 1 || e.j < 1 || e.i > *n || e.j > *n) throw ParseError(e.line, "index out of range");
    if (e.i > e.j) throw ParseError(e.line, "entries must satisfy i <= j");
    if (!seen.insert({k, e.i, e.j}).second) throw ParseError(e.line, "duplicate entry");
    target.set(e.j - 1, e.i - 1, e.v);
  };
  for (const auto& e : entries) {
    if (e.k < 1 || e.k > *m) throw ParseError(e.line, "index out of range");
    place(inst.A[e.k - 1], e, e.k);
  }
  if (!c_entries.empty()) {
    inst.C = SymQ(*n);
    for (const auto& e : c_entries) place(*inst.C, e, 0);
  }
  return inst;
}

std::string serialize_instance(const SdpInstance& inst) {
  inst.validate();
  std::ostringstream out;
  if (!inst.name.empty()) out << "name " << inst.name << "\n";
  out << "n " << inst.n << "\nm " << inst.m() << "\nb";
  for (const auto& v : inst.b) out << " " << to_string(v);
  out << "\n";
  for (std::size_t k = 0; k < inst.m(); ++k)
    for (std::size_t i = 0; i < inst.n; ++i)
      for (std::size_t j = i; j < inst.n; ++j)
        if (inst.A[k](i, j) != 0)
          out << "A " << k + 1 << " " << i + 1 << " " << j + 1 << " " << to_string(inst.A[k](i, j)) << "\n";
  if (inst.C)
    for (std::size_t i = 0; i < inst.n; ++i)
      for (std::size_t j = i; j < inst.n; ++j)
        if ((*inst.C)(i, j) != 0) out << "C " << i + 1 << " " << j + 1 << " " << to_string((*inst.C)(i, j)) << "\n";
  return out.str();
}

SdpInstance load_instance(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  SdpInstance inst = parse_instance(ss.str());
  if (inst.name.empty()) {
    auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.rfind('.');
    inst.name = dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
  }
  return inst;
}

RotationSpec make_rotation(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-3, 3);
  RotationSpec spec;
  spec.seed = seed;
  while (true) {
    MatQ t(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t(i, j) = dist(rng);
    if (determinant(t) != 0) {
      spec.T = t;
      return spec;
    }
  }
}

SymQ congruence(const MatQ& t, const SymQ& x) {
  MatQ d = t * x.dense() * t.transpose();
  return SymQ::from_dense(d);
}

SdpInstance rotate_instance(const SdpInstance& inst, const RotationSpec& spec) {
  if (spec.T.rows() != inst.n || spec.T.cols() != inst.n) throw std::invalid_argument("rotation dimension mismatch");
  if (determinant(spec.T) == 0) throw std::invalid_argument("singular T");
  SdpInstance out = inst;
  MatQ tt = spec.T.transpose();
  for (auto& a : out.A) a = congruence(tt, a);
  if (out.C) out.C = congruence(tt, *out.C);
  return out;
}

SymQ back_transform(const RotationSpec& spec, const SymQ& x) { return congruence(spec.T, x); }

SymD back_transform(const RotationSpec& spec, const SymD& x) {
  MatD t = to_double(spec.T);
  MatD d = t * x.dense() * t.transpose();
  return SymD::from_dense(d, false);
}

SymQ forward_transform(const RotationSpec& spec, const SymQ& x) {
  auto inv = inverse(spec.T);
  if (!inv) throw std::invalid_argument("singular T");
  return congruence(*inv, x);
}

}  // namespace lmicert
