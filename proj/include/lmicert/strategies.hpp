#pragma once

#include "lmicert/instance.hpp"
#include "lmicert/interval.hpp"
#include "lmicert/pipeline.hpp"
#include "lmicert/upoly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lmicert {

// A rational feasible matrix of rank r: A(X) = b and X (Y; I) = 0 hold exactly, S = X[iota, iota] is
// positive definite, hence X is PSD with exactly r positive eigenvalues.
struct ExactPointProof {
  SymQ X;
  MatQ Y;             // r x (n - r), rows in iota order
  Rational eig_margin;  // exact lower bound on lambda_min(S), so on lambda_r(X)
  std::int64_t y_bound = 0;
};

// Tries denominators 10, 100, ..., 10^6 for Y~; free parameters of the linear system are taken from X~
// with pivots preferred on J and free columns left on J'.
std::optional<ExactPointProof> exact_point_strategy(const SdpInstance& inst, const ChartSelection& chart,
                                                    const SymD& x_tilde, const std::vector<std::size_t>& J,
                                                    const std::vector<std::size_t>& J_prime, std::string* note = nullptr);

// Feasible points on a line X(t) = X0 + t X1 of the affine set. With S, R, W the iota/nonbasic blocks,
// rank X(t) = r and X(t) PSD whenever S(t) is positive definite and every entry of
// det(S) W - R adj(S) R^T vanishes. g is the gcd of those entries; the certified root of g is the
// unique one in (lo, hi], and S(t) stays positive definite on [lo, hi].
struct CurveProof {
  SymQ X0, X1;
  UPoly g;
  Interval t;
  Rational eig_margin;  // lower bound on lambda_min(S(t)) over t
};

std::optional<CurveProof> algebraic_curve_strategy(const SdpInstance& inst, const ChartSelection& chart,
                                                   const SymD& x_tilde, const std::vector<std::size_t>& J_prime,
                                                   const std::vector<Rational>& fixed_values,
                                                   std::string* note = nullptr);

// Entries of det(S) W - R adj(S) R^T along X0 + t X1, row-major over the nonbasic block.
std::vector<UPoly> schur_numerators(const SymQ& x0, const SymQ& x1, const std::vector<std::size_t>& iota);

// Lower bound on lambda_min(S(t)) for t in the interval via the midpoint and ||S1||_F.
std::optional<Rational> curve_margin(const SymQ& x0, const SymQ& x1, const std::vector<std::size_t>& iota,
                                     const Interval& t);

// Interval enclosure of X0 + t X1.
IntervalMatrix curve_enclosure(const SymQ& x0, const SymQ& x1, const Interval& t);

}  // namespace lmicert
