#include "properties.hpp"

#include "testkit.hpp"

#include "lmicert/certifier.hpp"
#include "lmicert/krawczyk.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace testkit {

namespace {

class Recorder {
 public:
  explicit Recorder(std::string name) : start_(std::chrono::steady_clock::now()) { r_.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    if (ok) return;
    if (r_.failures++ == 0) r_.first_failure = "case " + std::to_string(r_.cases) + ": " + what;
  }
  void next() { ++r_.cases; }
  PropertyResult done() {
    r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return r_;
  }

 private:
  PropertyResult r_;
  std::chrono::steady_clock::time_point start_;
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log10(lo), std::log10(hi));
  return std::pow(10.0, u(rng));
}

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

MatD scaled(const MatD& a, double target_norm2) {
  double s = oracle_norm2(a);
  return s > 0 ? a * (target_norm2 / s) : a;
}

MatD low_rank(std::mt19937_64& rng, std::size_t p, std::size_t q, std::size_t k) {
  if (k == 0) return MatD(p, q);
  return random_matrix(rng, p, k) * random_matrix(rng, k, q);
}

std::vector<std::string> var_names(std::size_t d) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < d; ++i) v.push_back("v" + std::to_string(i + 1));
  return v;
}

MultiPoly random_poly(std::mt19937_64& rng, const std::vector<std::string>& vars, std::size_t terms, unsigned degree) {
  MultiPoly p(vars);
  std::uniform_int_distribution<int> coef(-9, 9), deg(0, static_cast<int>(degree));
  for (std::size_t t = 0; t < terms; ++t) {
    Exponent e(vars.size(), 0);
    unsigned left = deg(rng);
    for (unsigned k = 0; k < left; ++k) ++e[pick(rng, 0, vars.size() - 1)];
    Rational c(coef(rng), static_cast<long>(pick(rng, 1, 4)));
    c.canonicalize();
    p.add_term(e, c);
  }
  return p;
}

}  // namespace

PropertyResult weyl_property(std::uint64_t seed, std::size_t cases) {
  Recorder rec("eigenvalue perturbation |l_i(A) - l_i(B)| <= ||A - B||");
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < cases; ++c, rec.next()) {
    std::size_t n = pick(rng, 1, 8);
    MatD a = random_symmetric(rng, n, log_uniform(rng, 1e-3, 1e3));
    MatD e = scaled(random_symmetric(rng, n), log_uniform(rng, 1e-12, 1.0) * std::max(1.0, oracle_norm2(a)));
    MatD b = a + e;
    auto la = sym_eigenvalues(a), lb = sym_eigenvalues(b);
    auto oa = oracle_eigenvalues(a);
    double d = oracle_norm2(e);
    double slack = 1e-12 * (oracle_norm2(a) + oracle_norm2(b) + 1);
    for (std::size_t i = 0; i < n; ++i) {
      rec.check(std::fabs(la[i] - lb[i]) <= d + slack,
                "i=" + std::to_string(i) + " gap " + num(std::fabs(la[i] - lb[i])) + " > " + num(d));
      rec.check(std::fabs(la[i] - oa[i]) <= slack, "eigenvalue disagrees with oracle at i=" + std::to_string(i));
    }
  }
  return rec.done();
}

PropertyResult singular_value_property(std::uint64_t seed, std::size_t cases) {
  Recorder rec("singular value perturbation |s_i(A) - s_i(B)| <= ||A - B||");
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < cases; ++c, rec.next()) {
    std::size_t p = pick(rng, 1, 8), q = pick(rng, 1, 8);
    MatD a = low_rank(rng, p, q, pick(rng, 0, std::min(p, q))) * log_uniform(rng, 1e-3, 1e3);
    MatD e = scaled(random_matrix(rng, p, q), log_uniform(rng, 1e-12, 1.0) * std::max(1.0, oracle_norm2(a)));
    MatD b = a + e;
    auto sa = singular_values(a), sb = singular_values(b), oa = oracle_singular_values(a);
    double d = oracle_norm2(e);
    double slack = 1e-12 * (oracle_norm2(a) + oracle_norm2(b) + 1);
    rec.check(sa.size() == std::min(p, q), "wrong number of singular values");
    for (std::size_t i = 0; i < std::min({sa.size(), sb.size(), oa.size()}); ++i) {
      rec.check(std::fabs(sa[i] - sb[i]) <= d + slack, "i=" + std::to_string(i) + " gap " +
                                                           num(std::fabs(sa[i] - sb[i])) + " > " + num(d));
      rec.check(std::fabs(sa[i] - oa[i]) <= slack, "singular value disagrees with oracle at i=" + std::to_string(i));
    }
  }
  return rec.done();
}

PropertyResult rank_reveal_property(std::uint64_t seed, std::size_t cases) {
  Recorder rec("rank-revealing guarantees against the SVD oracle");
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < cases; ++c, rec.next()) {
    std::size_t p = pick(rng, 1, 8), q = pick(rng, 1, 8);
    std::size_t k = pick(rng, 0, std::min(p, q));
    double noise = log_uniform(rng, 1e-14, 1e-4);
    MatD a = low_rank(rng, p, q, k) + random_matrix(rng, p, q, noise);
    double eps = log_uniform(rng, 1e-10, 1.0);
    RankRevealResult rr = rank_revealing_columns(a, eps);
    auto s = oracle_singular_values(a);
    double cpq = rr.c_pq;
    double slack = 1e-12 * (s.empty() ? 1.0 : std::max(1.0, s[0]));
    std::string tag = "p=" + std::to_string(p) + " q=" + std::to_string(q) + " eps=" + num(eps);
    rec.check(rr.cols.size() == rr.r, tag + ": |cols| != r");
    rec.check(std::is_sorted(rr.cols.begin(), rr.cols.end()), tag + ": cols not ascending");
    rec.check(cpq >= 1.0 && cpq <= rank_reveal_constant(p, q) + 1e-12, tag + ": c_pq outside its formula");
    double sr = rr.r ? s[rr.r - 1] : INFINITY;
    double sr1 = rr.r < s.size() ? s[rr.r] : 0.0;
    rec.check(sr >= eps - slack, tag + ": sigma_r " + num(sr) + " < eps");
    rec.check(sr1 <= cpq * eps + slack, tag + ": sigma_{r+1} " + num(sr1) + " > c_pq eps");
    if (rr.r > 0) {
      auto sc = oracle_singular_values(a.columns(rr.cols));
      rec.check(sc[rr.r - 1] >= sr / cpq - slack, tag + ": sigma_r(A^J) " + num(sc[rr.r - 1]) + " < sigma_r/c_pq");
      rec.check(std::fabs(rr.sigma_r - sr) <= 1e-10 * std::max(1.0, s[0]), tag + ": reported sigma_r differs");
    }
  }
  return rec.done();
}

PropertyResult kernel_identity_property(std::uint64_t seed, std::size_t cases) {
  Recorder rec("exact kernel basis Y = -S^-1 R^T annihilates X");
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < cases; ++c, rec.next()) {
    std::size_t n = pick(rng, 1, 6), r = pick(rng, 1, n);
    MatQ b = random_integer_matrix(rng, r, n, -4, 4);
    MatQ x = b.transpose() * b;
    auto iota = rref(x).pivots;
    std::size_t rk = iota.size();
    rec.check(rk == independent_columns(x).size(), "rref rank differs from oracle elimination");
    if (rk == 0 || rk == n) continue;
    std::vector<std::size_t> nb;
    for (std::size_t i = 0; i < n; ++i)
      if (std::find(iota.begin(), iota.end(), i) == iota.end()) nb.push_back(i);
    auto s_inv = inverse(x.submatrix(iota, iota));
    rec.check(s_inv.has_value(), "principal block on independent columns is singular");
    if (!s_inv) continue;
    MatQ y = *s_inv * x.submatrix(iota, nb) * Rational(-1);
    MatQ k(n, n - rk);
    for (std::size_t a = 0; a < rk; ++a)
      for (std::size_t j = 0; j < n - rk; ++j) k(iota[a], j) = y(a, j);
    for (std::size_t j = 0; j < n - rk; ++j) k(nb[j], j) = 1;
    MatQ z = x * k;
    bool zero = std::all_of(z.data().begin(), z.data().end(), [](const Rational& v) { return v == 0; });
    rec.check(zero, "X (Y; I) != 0 for n=" + std::to_string(n) + " r=" + std::to_string(rk));
    rec.check(y == kernel_chart(x, iota), "kernel basis differs from oracle elimination");
  }
  return rec.done();
}

PropertyResult submatrix_eigen_property(std::uint64_t seed, std::size_t cases) {
  Recorder rec("lambda_r(X_iota) >= (tau - delta)^2 / (n ||X*||) - delta");
  std::mt19937_64 rng(seed);
  std::size_t c = 0;
  while (c < cases) {
    std::size_t n = pick(rng, 2, 7), r = pick(rng, 1, n);
    MatD b = random_matrix(rng, r, n);
    MatD xs = b.transpose() * b;
    double delta = log_uniform(rng, 1e-10, 1e-1) * oracle_norm2(xs);
    MatD e = scaled(random_symmetric(rng, n), delta);
    MatD x = xs + e;
    delta = oracle_norm2(e);
    std::vector<std::size_t> iota;
    if (pick(rng, 0, 1)) {
      iota = rank_revealing_columns(x, std::max(delta, 1e-12)).cols;
    } else {
      std::vector<std::size_t> all(n);
      for (std::size_t i = 0; i < n; ++i) all[i] = i;
      std::shuffle(all.begin(), all.end(), rng);
      iota.assign(all.begin(), all.begin() + r);
      std::sort(iota.begin(), iota.end());
    }
    if (iota.empty()) continue;
    double tau = oracle_singular_values(x.columns(iota)).back();
    if (tau < delta) continue;  // bound assumes tau >= delta
    rec.next();
    ++c;
    double lam = oracle_eigenvalues(x.submatrix(iota, iota)).back();
    double bound = (tau - delta) * (tau - delta) / (n * oracle_norm2(xs)) - delta;
    rec.check(lam >= bound - 1e-12 * oracle_norm2(xs),
              "lambda_r " + num(lam) + " < bound " + num(bound) + " (n=" + std::to_string(n) + ")");
  }
  return rec.done();
}

PropertyResult inverse_stability_property(std::uint64_t seed, std::size_t cases) {
  Recorder rec("inverse stability: ||B^-1|| and ||A^-1 - B^-1|| bounds");
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < cases; ++c, rec.next()) {
    std::size_t n = pick(rng, 1, 7);
    MatD a = random_matrix(rng, n, n);
    auto ai = solve(a, MatD::identity(n));
    if (!ai) {
      rec.check(false, "random matrix reported singular");
      continue;
    }
    double nai = oracle_norm2(*ai);
    std::uniform_real_distribution<double> theta(0.0, 0.95);
    MatD d = scaled(random_matrix(rng, n, n), theta(rng) / nai);
    MatD b = a + d;
    double nd = oracle_norm2(d);
    auto bi = solve(b, MatD::identity(n));
    rec.check(bi.has_value(), "B reported singular although ||A - B|| < 1/||A^-1||");
    if (!bi) continue;
    double denom = 1 - nai * nd;
    double tol = 1e-9 * (1 + nai * nai / denom);
    rec.check(oracle_norm2(*bi) <= nai / denom + tol, "||B^-1|| bound violated");
    rec.check(oracle_norm2(*ai - *bi) <= nai * nai * nd / denom + tol, "||A^-1 - B^-1|| bound violated");
    rec.check(oracle_norm2(a * *ai - MatD::identity(n)) <= 1e-8 * (1 + nai * oracle_norm2(a)), "A A^-1 != I");
  }
  return rec.done();
}

PropertyResult hvec_property(std::uint64_t seed, std::size_t cases) {
  Recorder rec("hvec round trip and column-major lower-triangle order");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> v(-50, 50);
  for (std::size_t c = 0; c < cases; ++c, rec.next()) {
    std::size_t n = pick(rng, 1, 9);
    std::vector<Rational> h(n * (n + 1) / 2);
    for (auto& x : h) {
      x = Rational(v(rng), 7);
      x.canonicalize();
    }
    SymQ x = unhvec(h);
    rec.check(x.n() == n, "unhvec picked the wrong dimension");
    rec.check(hvec(x) == h, "hvec(unhvec(v)) != v");
    rec.check(unhvec(hvec(x)) == x, "unhvec(hvec(X)) != X");
    // Oracle ordering: (1,1), (2,1), ..., (n,1), (2,2), ...
    std::size_t pos = 0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = j; i < n; ++i, ++pos) {
        rec.check(x(i, j) == h[pos] && x(j, i) == h[pos], "entry order differs at position " + std::to_string(pos));
        rec.check(hvec_index(n, i, j) == pos && hvec_index(n, j, i) == pos, "hvec_index disagrees");
        rec.check(hvec_entry(n, pos) == std::make_pair(i, j), "hvec_entry disagrees");
      }
  }
  return rec.done();
}

PropertyResult jacobian_property(std::uint64_t seed, std::size_t cases) {
  Recorder rec("Jacobian against central finite differences");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (std::size_t c = 0; c < cases; ++c, rec.next()) {
    std::size_t d = pick(rng, 1, 4);
    auto vars = var_names(d);
    PolySystem f(vars);
    std::size_t m = pick(rng, 1, 4);
    for (std::size_t i = 0; i < m; ++i) f.add(random_poly(rng, vars, pick(rng, 1, 6), 4), "f");
    if (c % 4 == 0) {
      auto pu = random_phi_u(vars, m, seed + c);
      f = lagrange_system(f, pu.phi, pu.u);
    }
    std::vector<double> x(f.vars.size());
    for (auto& xi : x) xi = u(rng);
    auto jac = evaluate(jacobian(f), x);
    for (std::size_t j = 0; j < x.size(); ++j) {
      double h = 1e-6 * std::max(1.0, std::fabs(x[j]));
      auto xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      auto fp = f.evaluate(xp), fm = f.evaluate(xm);
      for (std::size_t i = 0; i < f.size(); ++i) {
        double fd = (fp[i] - fm[i]) / (2 * h);
        double err = std::fabs(fd - jac[i][j]) / std::max(1.0, std::fabs(jac[i][j]));
        rec.check(err <= 1e-5, "d f" + std::to_string(i) + " / d x" + std::to_string(j) + ": relative error " + num(err));
      }
    }
  }
  return rec.done();
}

PropertyResult interval_enclosure_property(std::uint64_t seed, std::size_t cases) {
  Recorder rec("interval evaluation encloses every point evaluation");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> v(-40, 40);
  for (std::size_t c = 0; c < cases; ++c, rec.next()) {
    std::size_t d = pick(rng, 1, 4);
    auto vars = var_names(d);
    MultiPoly p = random_poly(rng, vars, pick(rng, 1, 8), 5);
    Box box(d);
    std::vector<Rational> pt(d);
    for (std::size_t i = 0; i < d; ++i) {
      Rational a(v(rng), 16), b(v(rng), 16);
      if (b < a) std::swap(a, b);
      box[i] = Interval(a, b);
      Rational t(static_cast<long>(pick(rng, 0, 64)), 64);
      t.canonicalize();
      pt[i] = a + t * (b - a);
    }
    Interval range = p.evaluate(box);
    Rational val = p.evaluate(pt);
    rec.check(range.contains(val), "value " + to_string(val) + " outside " + to_string(range));
    rec.check(range.rounded(64).contains(range), "outward rounding shrank the enclosure");
  }
  return rec.done();
}

PropertyResult krawczyk_property(std::uint64_t seed, std::size_t cases) {
  Recorder rec("Krawczyk soundness: stored certificates replay, certified boxes hold the root");
  std::size_t done = 0;
  // Stored certificates: every certificate the corpus run produces must survive a JSON round trip and replay.
  for (const auto& name : certifiable_names()) {
    if (done >= cases) break;
    const auto& inst = corpus_entry(name).instance;
    CertifyOptions o;
    o.parallel_frontend = false;
    auto out = certify_hybrid(inst, o);
    rec.next();
    ++done;
    if (!out.certified()) continue;
    auto back = certificate_from_json(to_json(out.certificate));
    rec.check(to_json(back) == to_json(out.certificate), name + ": certificate JSON not stable");
    auto rep = replay(back, inst);
    rec.check(rep.ok, name + ": replay failed: " + rep.failure);
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-5, 5), root(-8, 8);
  std::normal_distribution<double> jitter(0.0, 1e-4);
  std::size_t positives = 0, certified = 0;
  for (; done < cases; ++done, rec.next()) {
    std::size_t d = pick(rng, 1, 4);
    auto vars = var_names(d);
    bool rootless = done % 10 == 0;
    std::vector<Rational> xs(d);
    for (auto& x : xs) {
      x = Rational(root(rng), 4);
      x.canonicalize();
    }
    std::vector<MultiPoly> shifted;
    for (std::size_t i = 0; i < d; ++i)
      shifted.push_back(MultiPoly::variable(vars, i) - MultiPoly::constant(vars, xs[i]));
    PolySystem f(vars);
    MatQ lin(d, d);
    do {
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) lin(i, j) = coef(rng);
    } while (determinant(lin) == 0);
    for (std::size_t i = 0; i < d; ++i) {
      MultiPoly p(vars);
      for (std::size_t j = 0; j < d; ++j) p += shifted[j] * lin(i, j);
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t l = j; l < d; ++l) p += shifted[j] * shifted[l] * Rational(coef(rng));
      if (rootless && i == 0) {
        // sum of squares plus one: no real zero at all
        p = MultiPoly::constant(vars, 1);
        for (std::size_t j = 0; j < d; ++j) p += shifted[j] * shifted[j];
      }
      f.add(p, "f");
    }
    std::vector<double> center(d);
    for (std::size_t i = 0; i < d; ++i) center[i] = to_double(xs[i]) + jitter(rng);
    auto nr = newton_refine(f, center, 20);
    auto kr = krawczyk_certify(f, nr.singular ? center : nr.x);
    if (rootless) {
      rec.check(!kr.certified, "certified a box for a system without real zeros");
      continue;
    }
    ++positives;
    if (!kr.certified) continue;
    ++certified;
    bool holds_root = true;
    for (std::size_t i = 0; i < d; ++i) holds_root = holds_root && kr.box[i].contains(xs[i]);
    // Newton starts 1e-4 away from the known root, so the unique zero in the box must be that root.
    rec.check(holds_root, "certified box misses the known root");
    rec.check(krawczyk_test(f, kr.box, KrawczykOptions{}.bits), "replay of a certified box failed");
    for (std::size_t i = 0; i < d; ++i) rec.check(kr.box[i].interior_contains(kr.image[i]), "image not inside box");
  }
  rec.check(certified * 2 >= positives, "fewer than half of the regular systems certified (" +
                                            std::to_string(certified) + "/" + std::to_string(positives) + ")");
  return rec.done();
}

std::vector<PropertyResult> run_property_suite(std::uint64_t seed) {
  return {weyl_property(seed + 1, 1000),
          singular_value_property(seed + 2, 1000),
          rank_reveal_property(seed + 3, 1000),
          kernel_identity_property(seed + 4, 1000),
          submatrix_eigen_property(seed + 5, 1000),
          inverse_stability_property(seed + 6, 1000),
          hvec_property(seed + 7, 1000),
          jacobian_property(seed + 8, 1000),
          interval_enclosure_property(seed + 9, 1000),
          krawczyk_property(seed + 10, 1000)};
}

}  // namespace testkit
