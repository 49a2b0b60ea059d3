#include "lmicert/certificate.hpp"

#include "lmicert/krawczyk.hpp"
#include "lmicert/linalg.hpp"
#include "lmicert/pipeline.hpp"
#include "lmicert/rur.hpp"
#include "lmicert/strategies.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>

namespace lmicert {

using nlohmann::json;

std::string to_string(CertStatus s) { return s == CertStatus::CertifiedFeasible ? "CERTIFIED_FEASIBLE" : "INCONCLUSIVE"; }

std::string to_string(CertMethod m) {
  switch (m) {
    case CertMethod::ExactPoint: return "exact-point";
    case CertMethod::AlgebraicCurve: return "algebraic-curve";
    case CertMethod::Krawczyk: return "krawczyk";
    case CertMethod::Rur: return "rur";
    default: return "none";
  }
}

CertStatus parse_status(const std::string& s) {
  if (s == "CERTIFIED_FEASIBLE") return CertStatus::CertifiedFeasible;
  if (s == "INCONCLUSIVE") return CertStatus::Inconclusive;
  throw std::invalid_argument("unknown status '" + s + "'");
}

CertMethod parse_method(const std::string& s) {
  for (CertMethod m : {CertMethod::None, CertMethod::ExactPoint, CertMethod::AlgebraicCurve, CertMethod::Krawczyk,
                       CertMethod::Rur})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown method '" + s + "'");
}

namespace {

json rationals(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

std::vector<Rational> rationals(const json& a) {
  std::vector<Rational> v;
  for (const auto& s : a) v.push_back(parse_rational(s.get<std::string>()));
  return v;
}

json indices(const std::vector<std::size_t>& v) {
  json a = json::array();
  for (auto i : v) a.push_back(i + 1);
  return a;
}

std::vector<std::size_t> indices(const json& a) {
  std::vector<std::size_t> v;
  for (const auto& i : a) {
    auto k = i.get<std::size_t>();
    if (k == 0) throw std::invalid_argument("indices are 1-based");
    v.push_back(k - 1);
  }
  return v;
}

SymQ sym_from(std::size_t n, const json& a) {
  auto v = rationals(a);
  if (v.size() != hvec_length(n)) throw std::invalid_argument("matrix has the wrong number of entries");
  return unhvec(v);
}

bool check_map(const SdpInstance& inst, const SymQ& x, const std::vector<Rational>& rhs) {
  return apply_map(inst, x) == rhs;
}

}  // namespace

std::string to_json(const Certificate& c) {
  json j;
  j["instance"] = c.instance;
  j["n"] = c.n;
  j["r"] = c.r;
  j["iota"] = indices(c.iota);
  j["J_prime"] = indices(c.J_prime);
  j["fixed_values"] = rationals(c.fixed_values);
  j["status"] = to_string(c.status);
  j["method"] = to_string(c.method);
  std::vector<Rational> lo, hi;
  for (const auto& iv : c.box) {
    lo.push_back(iv.lo());
    hi.push_back(iv.hi());
  }
  j["box"] = {{"vars", c.box_vars}, {"lo", rationals(lo)}, {"hi", rationals(hi)}};
  j["eig_margin"] = c.eig_margin ? json(to_string(*c.eig_margin)) : json(nullptr);
  j["phi"] = rationals(c.phi);
  j["u"] = rationals(c.u);
  j["seed"] = c.seed;
  j["narrative"] = c.narrative;
  if (c.point) j["point"] = rationals(hvec(*c.point));
  if (c.x0) j["x0"] = rationals(hvec(*c.x0));
  if (c.x1) j["x1"] = rationals(hvec(*c.x1));
  if (!c.g.is_zero()) j["g"] = rationals(c.g.coeffs());
  if (c.t) j["t"] = rationals({c.t->lo(), c.t->hi()});
  if (!c.system_polys.empty()) j["system"] = {{"vars", c.system_vars}, {"polys", c.system_polys}};
  if (!c.x_expressions.empty()) j["x_map"] = {{"vars", c.x_vars}, {"expressions", c.x_expressions}};
  if (c.bits) j["bits"] = c.bits;
  if (!c.rur_text.empty()) j["rur"] = {{"text", c.rur_text}, {"index", c.rur_index}};
  return j.dump(2) + "\n";
}

Certificate certificate_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("certificate is not valid JSON: ") + e.what());
  }
  try {
    Certificate c;
    c.instance = j.at("instance").get<std::string>();
    c.n = j.at("n").get<std::size_t>();
    c.r = j.at("r").get<std::size_t>();
    c.iota = indices(j.at("iota"));
    c.J_prime = indices(j.at("J_prime"));
    c.fixed_values = rationals(j.at("fixed_values"));
    c.status = parse_status(j.at("status").get<std::string>());
    c.method = parse_method(j.at("method").get<std::string>());
    const auto& box = j.at("box");
    c.box_vars = box.at("vars").get<std::vector<std::string>>();
    auto lo = rationals(box.at("lo")), hi = rationals(box.at("hi"));
    if (lo.size() != hi.size() || lo.size() != c.box_vars.size()) throw std::invalid_argument("box sizes differ");
    for (std::size_t i = 0; i < lo.size(); ++i) c.box.emplace_back(lo[i], hi[i]);
    if (!j.at("eig_margin").is_null()) c.eig_margin = parse_rational(j.at("eig_margin").get<std::string>());
    c.phi = rationals(j.at("phi"));
    c.u = rationals(j.at("u"));
    c.seed = j.at("seed").get<std::uint64_t>();
    c.narrative = j.at("narrative").get<std::vector<std::string>>();
    if (j.contains("point")) c.point = sym_from(c.n, j["point"]);
    if (j.contains("x0")) c.x0 = sym_from(c.n, j["x0"]);
    if (j.contains("x1")) c.x1 = sym_from(c.n, j["x1"]);
    if (j.contains("g")) c.g = UPoly(rationals(j["g"]));
    if (j.contains("t")) {
      auto t = rationals(j["t"]);
      if (t.size() != 2) throw std::invalid_argument("t must have two endpoints");
      c.t = Interval(t[0], t[1]);
    }
    if (j.contains("system")) {
      c.system_vars = j["system"].at("vars").get<std::vector<std::string>>();
      c.system_polys = j["system"].at("polys").get<std::vector<std::string>>();
    }
    if (j.contains("x_map")) {
      c.x_vars = j["x_map"].at("vars").get<std::vector<std::string>>();
      c.x_expressions = j["x_map"].at("expressions").get<std::vector<std::string>>();
    }
    if (j.contains("bits")) c.bits = j["bits"].get<unsigned>();
    if (j.contains("rur")) {
      c.rur_text = j["rur"].at("text").get<std::string>();
      c.rur_index = j["rur"].at("index").get<std::size_t>();
    }
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed certificate: ") + e.what());
  }
}

namespace {

struct Replayer {
  const Certificate& c;
  const SdpInstance& inst;
  ReplayResult res;

  bool pass(const std::string& what) {
    res.checks.push_back(what);
    return true;
  }
  bool fail(const std::string& what) {
    res.failure = what;
    return false;
  }

  bool margin_matches(const std::optional<Rational>& recomputed) {
    if (!recomputed || *recomputed <= 0) return fail("eigenvalue margin is not positive");
    if (!c.eig_margin || *c.eig_margin != *recomputed) return fail("stored eig_margin differs from the recomputed one");
    return pass("eig_margin recomputed: " + to_string(*recomputed));
  }

  bool header() {
    if (c.status != CertStatus::CertifiedFeasible) return fail("status is not CERTIFIED_FEASIBLE");
    if (c.n != inst.n) return fail("dimension differs from the instance");
    if (c.iota.size() != c.r) return fail("|iota| differs from r");
    for (auto i : c.iota)
      if (i >= c.n) return fail("chart index out of range");
    if (!std::is_sorted(c.iota.begin(), c.iota.end())) return fail("chart indices not ascending");
    return pass("header consistent with the instance");
  }

  bool exact_point() {
    if (!c.point) return fail("missing point");
    const SymQ& x = *c.point;
    if (!check_map(inst, x, inst.b)) return fail("A(X) != b");
    pass("A(X) = b exactly");
    Inertia in = inertia(x.dense());
    if (in.negative != 0) return fail("X has a negative eigenvalue");
    if (in.positive != c.r) return fail("rank of X differs from r");
    pass("inertia of X: " + std::to_string(in.positive) + " positive, " + std::to_string(in.zero) + " zero, 0 negative");
    MatQ s = x.dense().submatrix(c.iota, c.iota);
    if (!is_positive_definite(s)) return fail("S is not positive definite");
    if (!margin_matches(exact_min_eig_lower_bound(s))) return false;
    if (c.box.size() != hvec_length(c.n)) return fail("box does not cover hvec(X)");
    for (std::size_t p = 0; p < c.box.size(); ++p)
      if (!c.box[p].contains(x.lower()[p])) return fail("box does not contain the point");
    return pass("box contains the point");
  }

  bool curve() {
    if (!c.x0 || !c.x1 || !c.t || c.g.degree() <= 0) return fail("missing curve data");
    if (!check_map(inst, *c.x0, inst.b)) return fail("A(X0) != b");
    if (!check_map(inst, *c.x1, std::vector<Rational>(inst.m(), Rational(0)))) return fail("A(X1) != 0");
    pass("A(X0 + t X1) = b for every t");
    for (const auto& p : schur_numerators(*c.x0, *c.x1, c.iota))
      if (!divmod(p, c.g).second.is_zero()) return fail("a Schur numerator is not divisible by g");
    pass("g divides every entry of det(S) W - R adj(S) R^T");
    if (c.t->is_point()) {
      if (c.g(c.t->lo()) != 0) return fail("g does not vanish at the stored point");
    } else if (count_roots(sturm_sequence(squarefree_part(c.g)), c.t->lo(), c.t->hi()) != 1) {
      return fail("g does not have exactly one root in (lo, hi]");
    }
    pass("g has a unique root in the stored interval");
    if (!margin_matches(curve_margin(*c.x0, *c.x1, c.iota, *c.t))) return false;
    IntervalMatrix enc = curve_enclosure(*c.x0, *c.x1, *c.t);
    if (c.box.size() != hvec_length(c.n)) return fail("box does not cover hvec(X)");
    for (std::size_t p = 0; p < c.box.size(); ++p) {
      auto [i, j] = hvec_entry(c.n, p);
      if (!c.box[p].contains(enc(i, j))) return fail("box does not enclose X(t)");
    }
    return pass("box encloses X(t) over the root interval");
  }

  // Rebuild the fixed system from the instance, the chart and the fixed values.
  std::optional<FixedSystem> rebuild() {
    FixedSkeleton sk;
    sk.J_prime = c.J_prime;
    sk.fixed_values = c.fixed_values;
    if (sk.J_prime.size() != sk.fixed_values.size()) {
      fail("J' and fixed values differ in length");
      return std::nullopt;
    }
    FixedSystem fs = build_fixed_system(inst, make_chart(c.n, c.iota), sk);
    if (!fs.consistent) {
      fail("fixed system inconsistent");
      return std::nullopt;
    }
    std::vector<std::string> exprs;
    for (const auto& e : fs.x_expressions) exprs.push_back(e.to_string());
    if (fs.system.vars != c.x_vars || exprs != c.x_expressions) {
      fail("stored X map differs from the one rebuilt from the instance");
      return std::nullopt;
    }
    pass("X map rebuilt from the instance");
    return fs;
  }

  bool screen(const IntervalMatrix& x) {
    PsdScreen s = psd_screen(x, c.iota);
    if (s.verdict != PsdVerdict::Accepted) return fail("PSD screen: " + s.reason);
    pass("PSD screen accepted: " + s.reason);
    return margin_matches(s.margin);
  }

  bool krawczyk() {
    auto fs = rebuild();
    if (!fs) return false;
    if (c.phi.size() != fs->system.vars.size()) return fail("phi has the wrong length");
    MultiPoly phi(fs->system.vars);
    for (std::size_t i = 0; i < c.phi.size(); ++i) phi += MultiPoly::variable(fs->system.vars, i) * c.phi[i];
    PolySystem lag = lagrange_system(fs->system, phi, c.u);
    std::vector<std::string> polys;
    for (const auto& p : lag.polys) polys.push_back(p.to_string());
    if (lag.vars != c.system_vars || polys != c.system_polys) return fail("stored Lagrange system differs from the rebuilt one");
    pass("Lagrange system contains the fixed incidence polynomials of the instance");
    if (c.box_vars != lag.vars || c.box.size() != lag.vars.size()) return fail("box variables differ from the system's");
    std::string msg;
    if (!krawczyk_test(lag, c.box, c.bits, nullptr, &msg)) return fail(msg);
    pass(msg);
    std::map<std::string, Interval> vals;
    for (std::size_t i = 0; i < c.box.size(); ++i) vals[c.box_vars[i]] = c.box[i];
    auto x = x_enclosure(fs->x_expressions, c.n, vals);
    if (!x) return fail("box does not determine X");
    return screen(*x);
  }

  bool rur() {
    auto fs = rebuild();
    if (!fs) return false;
    Rur rur = parse_rur(c.rur_text);
    RurPoints pts = rur_real_points(rur);
    if (c.rur_index >= pts.points.size()) return fail("RUR point index out of range");
    const RurPoint& pt = pts.points[c.rur_index];
    std::map<std::string, Interval> vals;
    for (std::size_t i = 0; i < rur.var_names.size(); ++i) vals[rur.var_names[i]] = pt.coords[i];
    auto x = x_enclosure(fs->x_expressions, c.n, vals);
    if (!x) return fail("RUR does not determine X");
    pass("X reconstructed from RUR point " + std::to_string(c.rur_index));
    return screen(*x);
  }

  bool run() {
    if (!header()) return false;
    switch (c.method) {
      case CertMethod::ExactPoint: return exact_point();
      case CertMethod::AlgebraicCurve: return curve();
      case CertMethod::Krawczyk: return krawczyk();
      case CertMethod::Rur: return rur();
      default: return fail("no certification method recorded");
    }
  }
};

}  // namespace

std::optional<SymQ> x_midpoint(const Certificate& c) {
  if (c.status != CertStatus::CertifiedFeasible) return std::nullopt;
  if (c.point) return c.point;
  if (c.x0 && c.x1 && c.t) {
    SymQ x = *c.x0;
    Rational m = c.t->mid();
    for (std::size_t p = 0; p < hvec_length(c.n); ++p) {
      auto [i, j] = hvec_entry(c.n, p);
      x.set(i, j, (*c.x0)(i, j) + m * (*c.x1)(i, j));
    }
    return x;
  }
  if (c.x_expressions.size() != hvec_length(c.n)) return std::nullopt;
  std::map<std::string, Rational> mid;
  for (std::size_t i = 0; i < c.box.size(); ++i) mid[c.box_vars[i]] = c.box[i].mid();
  std::vector<Rational> pt;
  for (const auto& v : c.x_vars) {
    auto it = mid.find(v);
    pt.push_back(it == mid.end() ? Rational(0) : it->second);
  }
  SymQ x(c.n);
  for (std::size_t p = 0; p < c.x_expressions.size(); ++p) {
    auto [i, j] = hvec_entry(c.n, p);
    x.set(i, j, parse_polynomial(c.x_expressions[p], c.x_vars).evaluate(pt));
  }
  return x;
}

ReplayResult replay(const Certificate& c, const SdpInstance& inst) {
  Replayer r{c, inst, {}};
  try {
    r.res.ok = r.run();
  } catch (const std::exception& e) {
    r.res.ok = false;
    r.res.failure = std::string("replay raised: ") + e.what();
  }
  return r.res;
}

}  // namespace lmicert
