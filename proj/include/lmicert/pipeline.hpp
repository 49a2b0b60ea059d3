#pragma once

#include "lmicert/instance.hpp"
#include "lmicert/linalg.hpp"
#include "lmicert/poly.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lmicert {

class ChartError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Indices are 0-based throughout; names carry 1-based original indices.
struct ChartSelection {
  std::size_t n = 0, r = 0;
  std::vector<std::size_t> iota;      // ascending
  std::vector<std::size_t> nonbasic;  // [n] minus iota, ascending
  std::vector<std::size_t> perm;      // iota followed by nonbasic
  MatD Y_tilde;                       // r x (n - r); empty when built from iota alone
  double kernel_residual = 0.0;       // ||X~ (Y~; I)||_F
  RankRevealResult rank_info;

  // 1-based position of original index i in perm.
  std::size_t position(std::size_t i) const;
};

ChartSelection make_chart(std::size_t n, const std::vector<std::size_t>& iota);
// Throws ChartError on X~ = 0 or a numerically singular S~.
ChartSelection select_chart(const SymD& x_tilde, double epsilon1);

std::string x_name(std::size_t n, std::size_t i, std::size_t j);
std::string y_name(const ChartSelection& chart, std::size_t row, std::size_t col);
// hvec-ordered X names followed by Y names (rows in iota order, then columns).
std::vector<std::string> incidence_vars(const ChartSelection& chart);

// A(X) = b together with the entries of X (Y; I) that survive the redundancy rule.
struct IncidenceSystem {
  ChartSelection chart;
  std::vector<std::string> vars;
  std::size_t k = 0;  // number of X variables (the first k of vars)
  std::vector<MultiPoly> map_polys;
  std::vector<MultiPoly> kernel_polys;
  std::vector<std::pair<std::size_t, std::size_t>> kernel_positions;  // (row i, column c)
  std::vector<std::pair<std::size_t, std::size_t>> dropped;           // position(i) - (c+1) > r
  std::vector<std::vector<MultiPoly>> kernel_matrix;                  // n x (n - r)

  PolySystem system() const;
};

IncidenceSystem build_incidence(const SdpInstance& inst, const ChartSelection& chart, bool drop_redundant = true);

// Rows: map constraints then kept kernel entries; entries are polynomials in Y of degree <= 1.
struct Linearized {
  std::vector<std::string> vars;
  std::size_t k = 0;
  std::size_t y_rows = 0, y_cols = 0;  // shape of Y
  std::vector<std::vector<MultiPoly>> Q;
  std::vector<Rational> q;
};

Linearized build_linearized(const SdpInstance& inst, const ChartSelection& chart);
MatD evaluate_linearized(const Linearized& lin, const MatD& y);
// Matrix whose columns are the coefficient matrices of each Y variable (the linear part of Y -> Q(Y)).
MatD linear_part_matrix(const Linearized& lin);

struct FixedSkeleton {
  std::vector<std::size_t> J, J_prime;  // hvec positions
  std::vector<Rational> fixed_values;   // aligned with J_prime
  RankRevealResult rank_info;
};

constexpr std::int64_t kDefaultRationalBound = 1000000;

FixedSkeleton select_fixed_vars(const MatD& q_tilde, double epsilon2, const SymD& x_tilde,
                                std::int64_t rational_bound = kDefaultRationalBound);

// Incidence system after fixing variables and eliminating the affine constraints.
struct Reduction {
  PolySystem system;
  std::vector<MultiPoly> x_expressions;  // per hvec position, affine in the remaining X variables
  std::vector<std::size_t> eliminated;   // hvec positions removed through the map constraints
  bool consistent = true;
};

Reduction reduce(const IncidenceSystem& inc, const std::map<std::size_t, Rational>& fixed);

struct FixedSystem {
  PolySystem system;            // substituted form
  PolySystem pre_substitution;  // map, kernel and fixed-var polynomials over all variables
  ChartSelection chart;
  std::vector<std::size_t> J, J_prime;
  std::vector<Rational> fixed_values;
  std::vector<std::pair<std::size_t, std::size_t>> dropped_rows;
  std::vector<std::size_t> eliminated;
  std::vector<MultiPoly> x_expressions;
  bool consistent = true;
};

FixedSystem build_fixed_system(const SdpInstance& inst, const ChartSelection& chart, const FixedSkeleton& fixed);

// Interval enclosure of X from enclosures of the variables it depends on; nullopt if one is missing.
std::optional<IntervalMatrix> x_enclosure(const std::vector<MultiPoly>& x_expressions, std::size_t n,
                                          const std::map<std::string, Interval>& values);

struct ToleranceReport {
  double rho_star = 0, norm_x_star = 0, c_nn = 0, phi_delta = 0;
  double norm_q = 0, rho_q = 0, c_pq = 0, psi_delta = 0;
  bool precondition_ok = true;
  bool window1_ok = false, window2_ok = false, windows_ok = false;
  std::string message;
};

ToleranceReport tolerance_diagnostics(const SdpInstance& inst, const SymD& x_star, double delta, double epsilon1,
                                      double epsilon2);

}  // namespace lmicert
