#include "lmicert/strategies.hpp"

#include "lmicert/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace lmicert {

namespace {

// Row k holds the hvec coefficients of <A_k, X>.
MatQ map_matrix(const SdpInstance& inst) {
  const std::size_t n = inst.n, k = hvec_length(n);
  MatQ m(inst.m(), k);
  for (std::size_t t = 0; t < inst.m(); ++t)
    for (std::size_t p = 0; p < k; ++p) {
      auto [i, j] = hvec_entry(n, p);
      m(t, p) = i == j ? inst.A[t](i, j) : inst.A[t](i, j) * 2;
    }
  return m;
}

MatQ kernel_basis(const ChartSelection& chart, const MatQ& y) {
  MatQ v(chart.n, chart.n - chart.r);
  for (std::size_t a = 0; a < chart.r; ++a)
    for (std::size_t c = 0; c < chart.n - chart.r; ++c) v(chart.iota[a], c) = y(a, c);
  for (std::size_t c = 0; c < chart.n - chart.r; ++c) v(chart.nonbasic[c], c) = 1;
  return v;
}

MatQ block(const SymQ& x, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  MatQ b(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t c = 0; c < cols.size(); ++c) b(a, c) = x(rows[a], cols[c]);
  return b;
}

using PMat = std::vector<std::vector<UPoly>>;

UPoly det(const PMat& m) {
  const std::size_t n = m.size();
  if (n == 0) return UPoly({Rational(1)});
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  UPoly acc;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    PMat minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<UPoly> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(m[i][j]);
      minor.push_back(row);
    }
    UPoly term = m[0][c] * det(minor);
    acc = c % 2 ? acc - term : acc + term;
  }
  return acc;
}

PMat adjugate(const PMat& m) {
  const std::size_t n = m.size();
  PMat adj(n, std::vector<UPoly>(n));
  if (n == 1) {
    adj[0][0] = UPoly({Rational(1)});
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      PMat minor;
      for (std::size_t a = 0; a < n; ++a) {
        if (a == j) continue;
        std::vector<UPoly> row;
        for (std::size_t b = 0; b < n; ++b)
          if (b != i) row.push_back(m[a][b]);
        minor.push_back(row);
      }
      UPoly d = det(minor);
      adj[i][j] = (i + j) % 2 ? d * Rational(-1) : d;
    }
  return adj;
}

PMat line_block(const SymQ& x0, const SymQ& x1, const std::vector<std::size_t>& rows,
                const std::vector<std::size_t>& cols) {
  PMat b(rows.size(), std::vector<UPoly>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t c = 0; c < cols.size(); ++c) b[a][c] = UPoly({x0(rows[a], cols[c]), x1(rows[a], cols[c])});
  return b;
}

SymQ from_hvec(std::size_t n, const std::vector<Rational>& v) {
  SymQ x(n);
  for (std::size_t p = 0; p < v.size(); ++p) {
    auto [i, j] = hvec_entry(n, p);
    x.set(i, j, v[p]);
  }
  return x;
}

}  // namespace

std::optional<ExactPointProof> exact_point_strategy(const SdpInstance& inst, const ChartSelection& chart,
                                                    const SymD& x_tilde, const std::vector<std::size_t>& J,
                                                    const std::vector<std::size_t>& J_prime, std::string* note) {
  const std::size_t n = inst.n, k = hvec_length(n), nr = n - chart.r;
  if (chart.r == 0) {
    if (note) *note = "rank-0 chart";
    return std::nullopt;
  }
  MatQ amap = map_matrix(inst);
  std::vector<std::size_t> order = J;
  order.insert(order.end(), J_prime.begin(), J_prime.end());
  for (std::size_t p = 0; p < k; ++p)
    if (std::find(order.begin(), order.end(), p) == order.end()) order.push_back(p);

  std::string last = "no rationalization of Y~ admits a solution";
  for (std::int64_t bound = 10; bound <= 1000000; bound *= 10) {
    MatQ y(chart.r, nr);
    for (std::size_t a = 0; a < chart.r; ++a)
      for (std::size_t c = 0; c < nr; ++c) y(a, c) = rationalize(chart.Y_tilde(a, c), bound);
    MatQ v = kernel_basis(chart, y);

    MatQ sys(inst.m() + n * nr, k);
    std::vector<Rational> rhs(inst.m() + n * nr);
    for (std::size_t t = 0; t < inst.m(); ++t) {
      for (std::size_t p = 0; p < k; ++p) sys(t, p) = amap(t, p);
      rhs[t] = inst.b[t];
    }
    std::size_t row = inst.m();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < nr; ++c, ++row)
        for (std::size_t l = 0; l < n; ++l)
          if (v(l, c) != 0) sys(row, hvec_index(n, i, l)) += v(l, c);

    auto sol = solve_affine(sys, rhs, order);
    if (!sol) {
      last = "linear system inconsistent for Y~ rationalized at denominator " + std::to_string(bound);
      continue;
    }
    std::vector<Rational> xv = sol->particular;
    for (std::size_t f = 0; f < sol->free_columns.size(); ++f) {
      auto [i, j] = hvec_entry(n, sol->free_columns[f]);
      Rational val = rationalize(x_tilde(i, j), 1000000);
      for (std::size_t p = 0; p < k; ++p)
        if (sol->nullspace(p, f) != 0) xv[p] += sol->nullspace(p, f) * val;
    }
    SymQ x = from_hvec(n, xv);
    MatQ s = block(x, chart.iota, chart.iota);
    if (!is_positive_definite(s)) {
      last = "S not positive definite for Y~ rationalized at denominator " + std::to_string(bound);
      continue;
    }
    auto margin = exact_min_eig_lower_bound(s);
    if (!margin) {
      last = "no positive eigenvalue bound for S";
      continue;
    }
    if (note) *note = "exact point found with Y~ rationalized at denominator " + std::to_string(bound);
    return ExactPointProof{x, y, *margin, bound};
  }
  if (note) *note = last;
  return std::nullopt;
}

std::vector<UPoly> schur_numerators(const SymQ& x0, const SymQ& x1, const std::vector<std::size_t>& iota) {
  const std::size_t n = x0.n();
  std::vector<std::size_t> non;
  for (std::size_t i = 0; i < n; ++i)
    if (std::find(iota.begin(), iota.end(), i) == iota.end()) non.push_back(i);
  PMat s = line_block(x0, x1, iota, iota);
  PMat r = line_block(x0, x1, non, iota);
  PMat w = line_block(x0, x1, non, non);
  UPoly d = det(s);
  PMat adj = adjugate(s);
  std::vector<UPoly> out;
  for (std::size_t a = 0; a < non.size(); ++a)
    for (std::size_t b = 0; b < non.size(); ++b) {
      UPoly acc = d * w[a][b];
      for (std::size_t i = 0; i < iota.size(); ++i)
        for (std::size_t j = 0; j < iota.size(); ++j) acc = acc - r[a][i] * adj[i][j] * r[b][j];
      out.push_back(acc);
    }
  return out;
}

std::optional<Rational> curve_margin(const SymQ& x0, const SymQ& x1, const std::vector<std::size_t>& iota,
                                     const Interval& t) {
  const Rational m = t.mid();
  MatQ s(iota.size(), iota.size());
  Rational fro2 = 0;
  for (std::size_t a = 0; a < iota.size(); ++a)
    for (std::size_t b = 0; b < iota.size(); ++b) {
      s(a, b) = x0(iota[a], iota[b]) + m * x1(iota[a], iota[b]);
      fro2 += x1(iota[a], iota[b]) * x1(iota[a], iota[b]);
    }
  auto mu = exact_min_eig_lower_bound(s);
  if (!mu) return std::nullopt;
  Rational bound = *mu - t.rad() * sqrt_upper(fro2);
  if (bound <= 0) return std::nullopt;
  return bound;
}

IntervalMatrix curve_enclosure(const SymQ& x0, const SymQ& x1, const Interval& t) {
  const std::size_t n = x0.n();
  IntervalMatrix x(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) = Interval(x0(i, j)) + t * Interval(x1(i, j));
  return x;
}

std::optional<CurveProof> algebraic_curve_strategy(const SdpInstance& inst, const ChartSelection& chart,
                                                   const SymD& x_tilde, const std::vector<std::size_t>& J_prime,
                                                   const std::vector<Rational>& fixed_values, std::string* note) {
  auto say = [&](const std::string& s) {
    if (note) *note = s;
    return std::nullopt;
  };
  const std::size_t n = inst.n, k = hvec_length(n);
  if (chart.r == 0 || chart.r == n) return say("chart has no kernel block");
  MatQ amap = map_matrix(inst);
  auto sol = solve_affine(amap, inst.b);
  if (!sol) return say("affine constraints inconsistent");
  if (sol->free_columns.size() != 1) {
    MatQ ext(inst.m() + J_prime.size(), k);
    std::vector<Rational> rhs = inst.b;
    for (std::size_t t = 0; t < inst.m(); ++t)
      for (std::size_t p = 0; p < k; ++p) ext(t, p) = amap(t, p);
    for (std::size_t t = 0; t < J_prime.size(); ++t) {
      ext(inst.m() + t, J_prime[t]) = 1;
      rhs.push_back(fixed_values[t]);
    }
    sol = solve_affine(ext, rhs);
    if (!sol || sol->free_columns.size() != 1) return say("affine set is not a line, with or without the fixed values");
  }
  std::vector<Rational> dir(k);
  for (std::size_t p = 0; p < k; ++p) dir[p] = sol->nullspace(p, 0);
  SymQ x0 = from_hvec(n, sol->particular), x1 = from_hvec(n, dir);

  UPoly g;
  for (const auto& p : schur_numerators(x0, x1, chart.iota)) g = g.is_zero() ? p : gcd(g, p);
  if (g.is_zero()) return say("Schur complement vanishes identically along the line");
  g = g.monic();
  if (g.degree() <= 0) return say("Schur numerators have no common root");

  // Order roots by distance to the projection of X~ on the line.
  double num = 0, den = 0;
  for (std::size_t p = 0; p < k; ++p) {
    auto [i, j] = hvec_entry(n, p);
    double w = i == j ? 1.0 : 2.0;
    double d1 = to_double(dir[p]);
    num += w * (x_tilde(i, j) - to_double(sol->particular[p])) * d1;
    den += w * d1 * d1;
  }
  const double t_tilde = den > 0 ? num / den : 0.0;
  auto roots = isolate_real_roots(g);
  std::sort(roots.begin(), roots.end(), [&](const Interval& a, const Interval& b) {
    return std::fabs(to_double(a.mid()) - t_tilde) < std::fabs(to_double(b.mid()) - t_tilde);
  });
  for (Interval iv : roots) {
    Rational w(1, 1000000);
    for (int round = 0; round < 6; ++round, w /= 1000000) {
      iv = refine_root(g, iv, w);
      if (auto m = curve_margin(x0, x1, chart.iota, iv)) {
        if (note) *note = "root of " + g.to_string() + " certified on the affine line";
        return CurveProof{x0, x1, g, iv, *m};
      }
    }
  }
  return say("no real root of " + g.to_string() + " keeps S positive definite");
}

}  // namespace lmicert
