#include "lmicert/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lmicert {

std::size_t ChartSelection::position(std::size_t i) const {
  auto it = std::find(perm.begin(), perm.end(), i);
  if (it == perm.end()) throw std::out_of_range("index not in chart permutation");
  return static_cast<std::size_t>(it - perm.begin()) + 1;
}

ChartSelection make_chart(std::size_t n, const std::vector<std::size_t>& iota) {
  ChartSelection c;
  c.n = n;
  c.iota = iota;
  std::sort(c.iota.begin(), c.iota.end());
  if (std::adjacent_find(c.iota.begin(), c.iota.end()) != c.iota.end()) throw std::invalid_argument("repeated chart index");
  for (auto i : c.iota)
    if (i >= n) throw std::out_of_range("chart index out of range");
  c.r = c.iota.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!std::binary_search(c.iota.begin(), c.iota.end(), i)) c.nonbasic.push_back(i);
  c.perm = c.iota;
  c.perm.insert(c.perm.end(), c.nonbasic.begin(), c.nonbasic.end());
  c.Y_tilde = MatD(c.r, n - c.r);
  return c;
}

ChartSelection select_chart(const SymD& x_tilde, double epsilon1) {
  const std::size_t n = x_tilde.n();
  MatD x = x_tilde.dense();
  RankRevealResult rr = rank_revealing_columns(x, epsilon1);
  if (rr.r == 0) throw ChartError("terminate with failure: approximate solution has numerical rank 0");
  ChartSelection c = make_chart(n, rr.cols);
  c.rank_info = rr;
  if (c.r < n) {
    MatD s = x.submatrix(c.iota, c.iota);
    MatD rt = x.submatrix(c.iota, c.nonbasic);  // R^T, r x (n-r)
    auto y = solve(s, rt, 1e-14);
    if (!y) throw ChartError("terminate with failure: S is singular to working precision");
    c.Y_tilde = *y * -1.0;
  }
  MatD v(n, n - c.r);
  for (std::size_t a = 0; a < c.r; ++a)
    for (std::size_t col = 0; col < n - c.r; ++col) v(c.iota[a], col) = c.Y_tilde(a, col);
  for (std::size_t col = 0; col < n - c.r; ++col) v(c.nonbasic[col], col) = 1.0;
  c.kernel_residual = frobenius(x * v);
  return c;
}

std::string x_name(std::size_t n, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  std::string sep = n >= 10 ? "_" : "";
  return "x" + std::to_string(i + 1) + sep + std::to_string(j + 1);
}

std::string y_name(const ChartSelection& chart, std::size_t row, std::size_t col) {
  if (chart.n - chart.r == 1) return "y" + std::to_string(row + 1);
  std::string sep = chart.n >= 10 ? "_" : "";
  return "y" + std::to_string(row + 1) + sep + std::to_string(col + 1);
}

std::vector<std::string> incidence_vars(const ChartSelection& chart) {
  const std::size_t n = chart.n;
  std::vector<std::string> vars;
  for (std::size_t p = 0; p < hvec_length(n); ++p) {
    auto [i, j] = hvec_entry(n, p);
    vars.push_back(x_name(n, i, j));
  }
  for (auto row : chart.iota)
    for (std::size_t col = 0; col < n - chart.r; ++col) vars.push_back(y_name(chart, row, col));
  return vars;
}

PolySystem IncidenceSystem::system() const {
  PolySystem s(vars);
  for (std::size_t k2 = 0; k2 < map_polys.size(); ++k2) s.add(map_polys[k2], "map-constraint " + std::to_string(k2 + 1));
  for (std::size_t t = 0; t < kernel_polys.size(); ++t)
    s.add(kernel_polys[t], "kernel-entry(" + std::to_string(kernel_positions[t].first + 1) + "," +
                               std::to_string(kernel_positions[t].second + 1) + ")");
  return s;
}

IncidenceSystem build_incidence(const SdpInstance& inst, const ChartSelection& chart, bool drop_redundant) {
  inst.validate();
  if (chart.n != inst.n) throw std::invalid_argument("chart dimension differs from instance");
  const std::size_t n = inst.n, r = chart.r, nr = n - r;
  IncidenceSystem inc;
  inc.chart = chart;
  inc.vars = incidence_vars(chart);
  inc.k = hvec_length(n);
  const auto& vars = inc.vars;
  auto xv = [&](std::size_t i, std::size_t j) { return MultiPoly::variable(vars, hvec_index(n, i, j)); };

  for (std::size_t t = 0; t < inst.m(); ++t) {
    MultiPoly f = MultiPoly::constant(vars, -inst.b[t]);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = j; i < n; ++i) {
        const Rational& a = inst.A[t](i, j);
        if (a == 0) continue;
        f += xv(i, j) * (i == j ? a : 2 * a);
      }
    inc.map_polys.push_back(f);
  }

  inc.kernel_matrix.assign(n, std::vector<MultiPoly>(nr, MultiPoly(vars)));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t c = 0; c < nr; ++c) inc.kernel_matrix[chart.iota[a]][c] = MultiPoly::variable(vars, inc.k + a * nr + c);
  for (std::size_t c = 0; c < nr; ++c) inc.kernel_matrix[chart.nonbasic[c]][c] = MultiPoly::constant(vars, 1);

  for (std::size_t c = 0; c < nr; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      if (drop_redundant && chart.position(i) > c + 1 + r) {
        inc.dropped.emplace_back(i, c);
        continue;
      }
      MultiPoly e(vars);
      for (std::size_t l = 0; l < n; ++l)
        if (!inc.kernel_matrix[l][c].is_zero()) e += xv(i, l) * inc.kernel_matrix[l][c];
      inc.kernel_polys.push_back(e);
      inc.kernel_positions.emplace_back(i, c);
    }
  }
  return inc;
}

Linearized build_linearized(const SdpInstance& inst, const ChartSelection& chart) {
  IncidenceSystem inc = build_incidence(inst, chart);
  Linearized lin;
  lin.vars = inc.vars;
  lin.k = inc.k;
  lin.y_rows = chart.r;
  lin.y_cols = chart.n - chart.r;
  auto add_row = [&](const MultiPoly& f, const Rational& rhs) {
    std::vector<MultiPoly> row;
    for (std::size_t v = 0; v < inc.k; ++v) row.push_back(f.derivative(v));
    lin.Q.push_back(row);
    lin.q.push_back(rhs);
  };
  for (std::size_t t = 0; t < inc.map_polys.size(); ++t) add_row(inc.map_polys[t], inst.b[t]);
  for (const auto& f : inc.kernel_polys) add_row(f, 0);
  return lin;
}

namespace {

std::vector<double> y_point(const Linearized& lin, const MatD& y) {
  if (y.rows() != lin.y_rows || y.cols() != lin.y_cols) throw std::invalid_argument("Y has the wrong shape for this chart");
  std::vector<double> pt(lin.vars.size(), 0.0);
  std::size_t idx = lin.k;
  for (std::size_t a = 0; a < y.rows(); ++a)
    for (std::size_t c = 0; c < y.cols(); ++c) pt[idx++] = y(a, c);
  return pt;
}

}  // namespace

MatD evaluate_linearized(const Linearized& lin, const MatD& y) {
  auto pt = y_point(lin, y);
  MatD q(lin.Q.size(), lin.k);
  for (std::size_t i = 0; i < lin.Q.size(); ++i)
    for (std::size_t v = 0; v < lin.k; ++v) q(i, v) = lin.Q[i][v].evaluate(pt);
  return q;
}

MatD linear_part_matrix(const Linearized& lin) {
  const std::size_t ny = lin.vars.size() - lin.k;
  MatD m(lin.Q.size() * lin.k, ny);
  for (std::size_t i = 0; i < lin.Q.size(); ++i)
    for (std::size_t v = 0; v < lin.k; ++v)
      for (std::size_t a = 0; a < ny; ++a) m(i * lin.k + v, a) = to_double(lin.Q[i][v].linear_coefficient(lin.k + a));
  return m;
}

FixedSkeleton select_fixed_vars(const MatD& q_tilde, double epsilon2, const SymD& x_tilde, std::int64_t rational_bound) {
  if (!(epsilon2 > 0)) throw std::invalid_argument("epsilon2 must be positive");
  FixedSkeleton s;
  s.rank_info = rank_revealing_columns(q_tilde, epsilon2);
  s.J = s.rank_info.cols;
  const std::size_t n = x_tilde.n();
  for (std::size_t p = 0; p < q_tilde.cols(); ++p) {
    if (std::binary_search(s.J.begin(), s.J.end(), p)) continue;
    s.J_prime.push_back(p);
    auto [i, j] = hvec_entry(n, p);
    s.fixed_values.push_back(rationalize(x_tilde(i, j), rational_bound));
  }
  return s;
}

Reduction reduce(const IncidenceSystem& inc, const std::map<std::size_t, Rational>& fixed) {
  const auto& vars = inc.vars;
  const std::size_t k = inc.k;
  auto subst_fixed = [&](MultiPoly f) {
    for (const auto& [p, v] : fixed) f = f.substitute(p, v);
    return f;
  };
  std::vector<MultiPoly> maps, kerns;
  for (const auto& f : inc.map_polys) maps.push_back(subst_fixed(f));
  for (const auto& f : inc.kernel_polys) kerns.push_back(subst_fixed(f));

  std::vector<std::size_t> order;
  for (std::size_t p = 0; p < k; ++p)
    if (!fixed.count(p)) order.push_back(p);

  MatQ m(maps.size(), k);
  std::vector<Rational> rhs(maps.size());
  for (std::size_t t = 0; t < maps.size(); ++t) {
    for (std::size_t p = 0; p < k; ++p) m(t, p) = maps[t].linear_coefficient(p);
    rhs[t] = -maps[t].constant_term();
  }
  auto sol = maps.empty() ? std::optional<AffineSolution>(AffineSolution{std::vector<Rational>(k, Rational(0)),
                                                                         MatQ(k, order.size()), order})
                          : solve_affine(m, rhs, order);
  if (maps.empty())
    for (std::size_t f = 0; f < order.size(); ++f) sol->nullspace(order[f], f) = 1;

  Reduction red;
  red.consistent = sol.has_value();
  std::vector<MultiPoly> expr(k, MultiPoly(vars));
  std::vector<bool> is_free(k, false);
  for (std::size_t p = 0; p < k; ++p) {
    if (fixed.count(p)) {
      expr[p] = MultiPoly::constant(vars, fixed.at(p));
    } else if (!red.consistent) {
      expr[p] = MultiPoly::variable(vars, p);
      is_free[p] = true;
    }
  }
  if (red.consistent) {
    for (std::size_t p : sol->free_columns) {
      expr[p] = MultiPoly::variable(vars, p);
      is_free[p] = true;
    }
    for (std::size_t p : order) {
      if (is_free[p]) continue;
      red.eliminated.push_back(p);
      MultiPoly e = MultiPoly::constant(vars, sol->particular[p]);
      for (std::size_t f = 0; f < sol->free_columns.size(); ++f)
        if (sol->nullspace(p, f) != 0) e += MultiPoly::variable(vars, sol->free_columns[f]) * sol->nullspace(p, f);
      expr[p] = e;
    }
  }

  std::vector<std::string> out_vars;
  for (std::size_t p = 0; p < k; ++p)
    if (is_free[p]) out_vars.push_back(vars[p]);
  for (std::size_t v = k; v < vars.size(); ++v) out_vars.push_back(vars[v]);

  red.system = PolySystem(out_vars);
  auto finish = [&](MultiPoly f) {
    for (std::size_t p : red.eliminated) f = f.substitute(p, expr[p]);
    return f;
  };
  if (!red.consistent)
    for (std::size_t t = 0; t < maps.size(); ++t)
      if (!maps[t].is_zero()) red.system.add(maps[t].with_vars(out_vars), "map-constraint " + std::to_string(t + 1));
  for (std::size_t t = 0; t < kerns.size(); ++t) {
    MultiPoly f = finish(kerns[t]);
    if (f.is_zero()) continue;
    red.system.add(f.with_vars(out_vars), "kernel-entry(" + std::to_string(inc.kernel_positions[t].first + 1) + "," +
                                              std::to_string(inc.kernel_positions[t].second + 1) + ")");
  }
  for (auto& e : expr) e = e.with_vars(out_vars);
  red.x_expressions = std::move(expr);
  return red;
}

FixedSystem build_fixed_system(const SdpInstance& inst, const ChartSelection& chart, const FixedSkeleton& fixed) {
  IncidenceSystem inc = build_incidence(inst, chart);
  FixedSystem fs;
  fs.chart = chart;
  fs.J = fixed.J;
  fs.J_prime = fixed.J_prime;
  fs.fixed_values = fixed.fixed_values;
  fs.dropped_rows = inc.dropped;

  fs.pre_substitution = inc.system();
  std::map<std::size_t, Rational> fx;
  for (std::size_t t = 0; t < fixed.J_prime.size(); ++t) {
    std::size_t p = fixed.J_prime[t];
    fx[p] = fixed.fixed_values[t];
    fs.pre_substitution.add(MultiPoly::variable(inc.vars, p) - MultiPoly::constant(inc.vars, fixed.fixed_values[t]),
                            "fixed-var " + inc.vars[p]);
  }
  Reduction red = reduce(inc, fx);
  fs.system = std::move(red.system);
  fs.eliminated = std::move(red.eliminated);
  fs.x_expressions = std::move(red.x_expressions);
  fs.consistent = red.consistent;
  return fs;
}

std::optional<IntervalMatrix> x_enclosure(const std::vector<MultiPoly>& x_expressions, std::size_t n,
                                          const std::map<std::string, Interval>& values) {
  if (x_expressions.size() != hvec_length(n)) throw std::invalid_argument("expression count differs from n(n+1)/2");
  IntervalMatrix x(n, n);
  for (std::size_t p = 0; p < x_expressions.size(); ++p) {
    const MultiPoly& e = x_expressions[p];
    std::vector<Interval> pt(e.nvars(), Interval(0));
    for (std::size_t v = 0; v < e.nvars(); ++v) {
      if (!e.uses(v)) continue;
      auto it = values.find(e.vars()[v]);
      if (it == values.end()) return std::nullopt;
      pt[v] = it->second;
    }
    Interval val = e.evaluate(pt);
    auto [i, j] = hvec_entry(n, p);
    x(i, j) = val;
    x(j, i) = val;
  }
  return x;
}

ToleranceReport tolerance_diagnostics(const SdpInstance& inst, const SymD& x_star, double delta, double epsilon1,
                                      double epsilon2) {
  if (delta < 0) throw std::invalid_argument("delta must be non-negative");
  ToleranceReport rep;
  const std::size_t n = x_star.n();
  MatD x = x_star.dense();
  rep.rho_star = rho(x, epsilon1);
  rep.norm_x_star = norm2(x);
  rep.c_nn = rank_reveal_constant(n, n);
  double t = (rep.rho_star - delta) / rep.c_nn - delta;
  rep.phi_delta = t * t / (static_cast<double>(n) * rep.norm_x_star) - delta;

  ChartSelection chart = select_chart(x_star, epsilon1);
  Linearized lin = build_linearized(inst, chart);
  MatD q_star = evaluate_linearized(lin, chart.Y_tilde);
  MatD lp = linear_part_matrix(lin);
  rep.norm_q = lp.cols() ? norm2(lp) : 0.0;
  double qn = norm2(q_star);
  rep.rho_q = qn > 0 ? rho(q_star, 1e-12 * std::max(1.0, qn)) : 0.0;
  rep.c_pq = rank_reveal_constant(q_star.rows(), q_star.cols());

  rep.window1_ok = delta < epsilon1 && epsilon1 < (rep.rho_star - delta) / rep.c_nn;
  if (rep.phi_delta <= delta) {
    rep.precondition_ok = false;
    rep.psi_delta = std::numeric_limits<double>::infinity();
    rep.message = "phi(delta) <= delta: the fixed-variable window precondition fails";
    return rep;
  }
  rep.psi_delta = rep.norm_q * (rep.norm_x_star / (rep.phi_delta - delta) + 1.0) * delta / rep.phi_delta;
  rep.window2_ok = rep.psi_delta < epsilon2 && epsilon2 < (rep.rho_q - rep.psi_delta) / rep.c_pq;
  rep.windows_ok = rep.window1_ok && rep.window2_ok;
  return rep;
}

}  // namespace lmicert
