#include "testkit.hpp"

#include "lmicert/certifier.hpp"
#include "lmicert/pipeline.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <map>

using namespace lmicert;

namespace {

const SdpInstance& druwo() { return corpus_entry("DruWo2017-2.3.2P").instance; }

// hvec(X) followed by the chart variables, rows in iota order.
std::vector<Rational> incidence_point(const SymQ& x, const MatQ& y) {
  std::vector<Rational> pt = hvec(x);
  for (std::size_t a = 0; a < y.rows(); ++a)
    for (std::size_t c = 0; c < y.cols(); ++c) pt.push_back(y(a, c));
  return pt;
}

std::map<std::string, Rational> by_name(const std::vector<std::string>& vars, const std::vector<Rational>& pt) {
  std::map<std::string, Rational> m;
  for (std::size_t i = 0; i < vars.size(); ++i) m[vars[i]] = pt[i];
  return m;
}

std::vector<Rational> restrict_to(const std::vector<std::string>& vars, const std::map<std::string, Rational>& m) {
  std::vector<Rational> pt;
  for (const auto& v : vars) pt.push_back(m.at(v));
  return pt;
}

MatD dense_y(const MatQ& y) { return to_double(y); }

}  // namespace

TEST(Pipeline, GoldenWorkedExample) {
  CertifyOptions o;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    SymD xt = testkit::worked_example_point(rng, 1e-9);
    auto t0 = std::chrono::steady_clock::now();
    ChartSelection chart = select_chart(xt, o.epsilon1());
    Linearized lin = build_linearized(druwo(), chart);
    MatD q = evaluate_linearized(lin, chart.Y_tilde);
    FixedSkeleton sk = select_fixed_vars(q, o.epsilon2(), xt);
    FixedSystem fs = build_fixed_system(druwo(), chart, sk);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    EXPECT_EQ(chart.iota, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(sk.J_prime, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(sk.fixed_values, (std::vector<Rational>{1, 0}));
    EXPECT_TRUE(fs.consistent);
    std::vector<std::string> vars{"x22", "x23", "y1", "y2"};
    EXPECT_EQ(fs.system.vars, vars);
    EXPECT_TRUE(testkit::same_up_to_scaling(fs.system.polys, testkit::worked_example_system(), vars))
        << "seed " << seed;
    EXPECT_LT(secs, 1.0);
  }
}

TEST(Pipeline, GoldenSystemVanishesAtTheTarget) {
  std::mt19937_64 rng(3);
  SymD xt = testkit::worked_example_point(rng, 1e-9);
  CertifyOptions o;
  ChartSelection chart = select_chart(xt, o.epsilon1());
  MatD q = evaluate_linearized(build_linearized(druwo(), chart), chart.Y_tilde);
  FixedSystem fs = build_fixed_system(druwo(), chart, select_fixed_vars(q, o.epsilon2(), xt));
  std::vector<Rational> target{1, 0, 0, 0};
  for (const auto& p : fs.system.polys) EXPECT_EQ(p.evaluate(target), 0);
  // the X expressions recover diag(1, 1, 0)
  SymQ x(3);
  for (std::size_t p = 0; p < 6; ++p) {
    auto [i, j] = hvec_entry(3, p);
    x.set(i, j, fs.x_expressions[p].evaluate(target));
  }
  SymQ expect(3);
  expect.set(0, 0, 1);
  expect.set(1, 1, 1);
  EXPECT_EQ(x, expect);
  EXPECT_EQ(fs.eliminated, (std::vector<std::size_t>{2, 5}));
}

TEST(Chart, MakeChartLayout) {
  ChartSelection c = make_chart(4, {2, 0});
  EXPECT_EQ(c.iota, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(c.nonbasic, (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(c.perm, (std::vector<std::size_t>{0, 2, 1, 3}));
  EXPECT_EQ(c.position(2), 2u);
  EXPECT_EQ(c.position(1), 3u);
  EXPECT_THROW(make_chart(3, {0, 0}), std::invalid_argument);
  EXPECT_THROW(make_chart(3, {3}), std::out_of_range);
  EXPECT_THROW(c.position(7), std::out_of_range);
}

TEST(Chart, Names) {
  EXPECT_EQ(x_name(3, 2, 0), "x13");
  EXPECT_EQ(x_name(3, 1, 1), "x22");
  EXPECT_EQ(x_name(10, 0, 9), "x1_10");
  EXPECT_EQ(incidence_vars(make_chart(3, {0, 1})),
            (std::vector<std::string>{"x11", "x12", "x13", "x22", "x23", "x33", "y1", "y2"}));
  EXPECT_EQ(incidence_vars(make_chart(3, {1})),
            (std::vector<std::string>{"x11", "x12", "x13", "x22", "x23", "x33", "y21", "y22"}));
  EXPECT_EQ(incidence_vars(make_chart(2, {0, 1})), (std::vector<std::string>{"x11", "x12", "x22"}));
}

TEST(Chart, SelectChartFailsOnZero) {
  EXPECT_THROW(select_chart(SymD(3), 1e-6), ChartError);
  try {
    select_chart(SymD(2), 1e-6);
  } catch (const ChartError& e) {
    EXPECT_NE(std::string(e.what()).find("rank 0"), std::string::npos);
  }
}

TEST(Chart, KernelOfSelectedChartMatchesOracle) {
  // Y~ = -S^{-1} R^T against the exact rational solve, on exact low-rank inputs
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 2 + trial % 5, r = 1 + trial % n;
    if (r > n) r = n;
    MatQ g = testkit::random_integer_matrix(rng, n, r, -3, 3);
    MatQ x = g * g.transpose();
    auto iota = testkit::independent_columns(x);
    SymD xd = to_double(SymQ::from_dense(x));
    ChartSelection c = select_chart(xd, 1e-8);
    ASSERT_EQ(c.r, iota.size());
    MatQ y = testkit::kernel_chart(x, c.iota);
    for (std::size_t a = 0; a < c.r; ++a)
      for (std::size_t col = 0; col < n - c.r; ++col)
        EXPECT_NEAR(c.Y_tilde(a, col), to_double(y(a, col)), 1e-8 * (1 + std::abs(to_double(y(a, col)))));
    EXPECT_LT(c.kernel_residual, 1e-9 * (1 + testkit::oracle_norm2(xd.dense())));
  }
}

TEST(Chart, FullRankChartHasNoKernelVariables) {
  const auto& inst = corpus_entry("Hauenstein2.6P").instance;
  ChartSelection c = make_chart(inst.n, {0, 1, 2});
  IncidenceSystem inc = build_incidence(inst, c);
  EXPECT_EQ(inc.vars.size(), hvec_length(inst.n));
  EXPECT_TRUE(inc.kernel_polys.empty());
  EXPECT_EQ(inc.map_polys.size(), inst.m());
}

TEST(Incidence, RedundancyRule) {
  // r = 1, n = 3: entry (3, 1) of X (Y; I) is implied by the others and dropped
  IncidenceSystem inc = build_incidence(druwo(), make_chart(3, {0}));
  EXPECT_EQ(inc.kernel_polys.size(), 5u);
  EXPECT_EQ(inc.dropped, (std::vector<std::pair<std::size_t, std::size_t>>{{2, 0}}));
  IncidenceSystem full = build_incidence(druwo(), make_chart(3, {0}), false);
  EXPECT_EQ(full.kernel_polys.size(), 6u);
  EXPECT_TRUE(full.dropped.empty());
  // r = 2: nothing to drop
  EXPECT_TRUE(build_incidence(druwo(), make_chart(3, {0, 1})).dropped.empty());
  EXPECT_THROW(build_incidence(druwo(), make_chart(4, {0})), std::invalid_argument);
}

TEST(Incidence, KnownPointsSatisfyTheirChartSystem) {
  for (const auto& e : corpus()) {
    auto kp = testkit::min_rank_point(e.instance.name);
    auto x = kp.lifted();
    auto iota = testkit::independent_columns(x);
    ChartSelection chart = make_chart(e.n, iota);
    for (bool drop : {true, false}) {
      IncidenceSystem inc = build_incidence(e.instance, chart, drop);
      EXPECT_EQ(inc.kernel_polys.size() + inc.dropped.size(), e.n * (e.n - iota.size()));
      const testkit::Field* f = kp.field;
      if (!f) {
        MatQ y = testkit::kernel_chart(kp.rational->dense(), iota);
        auto pt = incidence_point(*kp.rational, y);
        for (const auto& v : inc.system().evaluate(pt)) EXPECT_EQ(v, 0) << e.instance.name;
        continue;
      }
      auto y = testkit::kernel_chart(x, iota);
      std::vector<testkit::Elem> pt;
      for (std::size_t p = 0; p < hvec_length(e.n); ++p) {
        auto [i, j] = hvec_entry(e.n, p);
        pt.push_back(x[i][j]);
      }
      for (const auto& row : y)
        for (const auto& v : row) pt.push_back(v);
      for (const auto& poly : inc.system().polys)
        EXPECT_TRUE(testkit::evaluate(poly, pt, f).is_zero()) << e.instance.name;
    }
  }
}

TEST(Incidence, PerturbedPointViolatesTheSystem) {
  auto kp = testkit::min_rank_point("Gupta2013-12.3P");
  auto iota = testkit::independent_columns(kp.rational->dense());
  IncidenceSystem inc = build_incidence(corpus_entry("Gupta2013-12.3P").instance, make_chart(3, iota));
  SymQ x = *kp.rational;
  x.set(0, 0, x(0, 0) + 1);
  auto pt = incidence_point(x, testkit::kernel_chart(kp.rational->dense(), iota));
  bool nonzero = false;
  for (const auto& v : inc.system().evaluate(pt)) nonzero = nonzero || v != 0;
  EXPECT_TRUE(nonzero);
}

TEST(Linearized, ProductWithHvecReproducesIncidencePolynomials) {
  std::mt19937_64 rng(22);
  for (const auto& e : corpus()) {
    for (std::size_t r = 0; r <= std::min<std::size_t>(e.n, 2); ++r) {
      std::vector<std::size_t> iota;
      for (std::size_t i = 0; i < r; ++i) iota.push_back(e.n - 1 - i);
      ChartSelection chart = make_chart(e.n, iota);
      Linearized lin = build_linearized(e.instance, chart);
      IncidenceSystem inc = build_incidence(e.instance, chart);
      MatD y = testkit::random_matrix(rng, r, e.n - r);
      SymD x = SymD::from_dense(testkit::random_symmetric(rng, e.n));
      MatD q = evaluate_linearized(lin, y);
      ASSERT_EQ(q.rows(), inc.map_polys.size() + inc.kernel_polys.size());
      std::vector<double> pt = x.lower();
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t c = 0; c < e.n - r; ++c) pt.push_back(y(a, c));
      auto vals = inc.system().evaluate(pt);
      for (std::size_t i = 0; i < q.rows(); ++i) {
        double s = -to_double(lin.q[i]);
        for (std::size_t v = 0; v < lin.k; ++v) s += q(i, v) * x.lower()[v];
        EXPECT_NEAR(s, vals[i], 1e-10) << e.instance.name;
      }
      // Q(Y) is affine in Y with the reported linear part
      MatD q0 = evaluate_linearized(lin, MatD(r, e.n - r));
      MatD lp = linear_part_matrix(lin);
      std::vector<double> yv;
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t c = 0; c < e.n - r; ++c) yv.push_back(y(a, c));
      for (std::size_t i = 0; i < q.rows(); ++i)
        for (std::size_t v = 0; v < lin.k; ++v) {
          double s = q0(i, v);
          for (std::size_t a = 0; a < yv.size(); ++a) s += lp(i * lin.k + v, a) * yv[a];
          EXPECT_NEAR(s, q(i, v), 1e-12);
        }
      EXPECT_THROW(evaluate_linearized(lin, MatD(r + 1, e.n - r)), std::invalid_argument);
    }
  }
}

TEST(FixedSystem, RationalKnownPointsSatisfyTheReducedSystem) {
  for (const auto& e : corpus()) {
    auto kp = testkit::min_rank_point(e.instance.name);
    if (!kp.rational) continue;
    const SymQ& xs = *kp.rational;
    auto iota = testkit::independent_columns(xs.dense());
    ChartSelection chart = make_chart(e.n, iota);
    MatQ y = testkit::kernel_chart(xs.dense(), iota);
    Linearized lin = build_linearized(e.instance, chart);
    MatD q = evaluate_linearized(lin, dense_y(y));
    FixedSkeleton sk = select_fixed_vars(q, 1e-6, to_double(xs));
    for (std::size_t t = 0; t < sk.J_prime.size(); ++t) {
      auto [i, j] = hvec_entry(e.n, sk.J_prime[t]);
      EXPECT_EQ(sk.fixed_values[t], xs(i, j)) << e.instance.name;
    }
    FixedSystem fs = build_fixed_system(e.instance, chart, sk);
    ASSERT_TRUE(fs.consistent) << e.instance.name;
    auto named = by_name(incidence_vars(chart), incidence_point(xs, y));
    for (const auto& v : fs.pre_substitution.evaluate(restrict_to(fs.pre_substitution.vars, named)))
      EXPECT_EQ(v, 0) << e.instance.name;
    auto pt = restrict_to(fs.system.vars, named);
    for (const auto& v : fs.system.evaluate(pt)) EXPECT_EQ(v, 0) << e.instance.name;
    for (std::size_t p = 0; p < hvec_length(e.n); ++p) {
      auto [i, j] = hvec_entry(e.n, p);
      EXPECT_EQ(fs.x_expressions[p].evaluate(pt), xs(i, j)) << e.instance.name;
    }
  }
}

TEST(FixedSystem, InconsistentFixingKeepsTheMapConstraints) {
  ChartSelection chart = make_chart(3, {0, 1});
  FixedSkeleton sk;
  sk.J = {0, 1, 2, 3, 4};
  sk.J_prime = {5};
  sk.fixed_values = {1};  // x33 = 1 contradicts x33 = 0
  FixedSystem fs = build_fixed_system(druwo(), chart, sk);
  EXPECT_FALSE(fs.consistent);
  bool has_map = false;
  for (const auto& l : fs.system.labels) has_map = has_map || l.rfind("map-constraint", 0) == 0;
  EXPECT_TRUE(has_map);
}

TEST(FixedSystem, SelectFixedVarsRejectsBadTolerance) {
  EXPECT_THROW(select_fixed_vars(MatD(2, 3), 0.0, SymD(2)), std::invalid_argument);
}

TEST(XEnclosure, PointValuesAndMissingVariables) {
  std::mt19937_64 rng(5);
  SymD xt = testkit::worked_example_point(rng, 1e-9);
  CertifyOptions o;
  ChartSelection chart = select_chart(xt, o.epsilon1());
  MatD q = evaluate_linearized(build_linearized(druwo(), chart), chart.Y_tilde);
  FixedSystem fs = build_fixed_system(druwo(), chart, select_fixed_vars(q, o.epsilon2(), xt));
  std::map<std::string, Interval> vals{{"x22", Interval(1)}, {"x23", Interval(0)}};
  auto x = x_enclosure(fs.x_expressions, 3, vals);
  ASSERT_TRUE(x);
  EXPECT_EQ((*x)(0, 0), Interval(1));
  EXPECT_EQ((*x)(1, 1), Interval(1));
  EXPECT_EQ((*x)(0, 2), Interval(0));
  vals["x22"] = Interval(Rational(1, 2), Rational(3, 2));
  x = x_enclosure(fs.x_expressions, 3, vals);
  EXPECT_TRUE((*x)(0, 2).contains(Rational(1, 4)));  // x13 = (1 - x22) / 2
  EXPECT_TRUE((*x)(2, 0).contains(Rational(-1, 4)));
  EXPECT_FALSE(x_enclosure(fs.x_expressions, 3, {{"x22", Interval(1)}}).has_value());
  EXPECT_THROW(x_enclosure(fs.x_expressions, 4, vals), std::invalid_argument);
}

TEST(Tolerance, DiagnosticsAtTheExactTarget) {
  SymD xs(3);
  xs.set(0, 0, 1);
  xs.set(1, 1, 1);
  double delta = 1e-9, e1 = std::sqrt(1e-9), e2 = 1e3 * e1;
  ToleranceReport rep = tolerance_diagnostics(druwo(), xs, delta, e1, e2);
  EXPECT_NEAR(rep.rho_star, 1.0, 1e-12);
  EXPECT_NEAR(rep.norm_x_star, 1.0, 1e-12);
  EXPECT_NEAR(rep.c_nn, std::sqrt(1 + 4.0 * 1 * 2), 1e-12);
  double t = (1 - delta) / rep.c_nn - delta;
  EXPECT_NEAR(rep.phi_delta, t * t / 3 - delta, 1e-12);
  EXPECT_TRUE(rep.precondition_ok);
  EXPECT_TRUE(rep.window1_ok);
  double psi = rep.norm_q * (rep.norm_x_star / (rep.phi_delta - delta) + 1) * delta / rep.phi_delta;
  EXPECT_NEAR(rep.psi_delta, psi, 1e-15);
  EXPECT_GT(rep.psi_delta, 0);
  EXPECT_LT(rep.psi_delta, e2);
  EXPECT_THROW(tolerance_diagnostics(druwo(), xs, -1, e1, e2), std::invalid_argument);
}

TEST(Tolerance, LargePerturbationBreaksThePrecondition) {
  SymD xs(3);
  xs.set(0, 0, 1);
  xs.set(1, 1, 1);
  ToleranceReport rep = tolerance_diagnostics(druwo(), xs, 0.5, 0.1, 1.0);
  EXPECT_FALSE(rep.precondition_ok);
  EXPECT_FALSE(rep.windows_ok);
  EXPECT_FALSE(rep.message.empty());
}
