#pragma once

#include "lmicert/matrix.hpp"

#include <optional>
#include <vector>

namespace lmicert {

// ---- floating point ----

struct SymEigen {
  std::vector<double> values;  // descending
  MatD vectors;                // column i belongs to values[i]
};

// Cyclic Jacobi rotations.
SymEigen sym_eigen(const MatD& a);
std::vector<double> sym_eigenvalues(const MatD& a);
std::vector<double> sym_eigenvalues(const SymD& x);

struct Svd {
  std::vector<double> values;  // descending, length min(p,q)
  MatD v;                      // right singular vectors as columns, q x q
};

// One-sided Jacobi.
Svd svd(const MatD& a);
std::vector<double> singular_values(const MatD& a);
double norm2(const MatD& a);
double frobenius(const MatD& a);

struct RankRevealResult {
  std::size_t r = 0;
  std::vector<std::size_t> cols;  // ascending
  double sigma_r = 0.0;           // sigma_r(A); 0 when r = 0
  double sigma_r_plus_1 = 0.0;    // 0 when r = min(p,q)
  double c_pq = 1.0;
  std::size_t volume_swaps = 0;
};

// Swap threshold of the local maximum-volume refinement.
constexpr double kVolumeFactor = 2.0;
// sqrt(1 + f^2 r (q - r)) maximized over r: the constant reported for a q-column input.
double rank_reveal_constant(std::size_t p, std::size_t q);

// Numerical rank and a well-conditioned maximal column subset.
RankRevealResult rank_revealing_columns(const MatD& a, double epsilon);

// sigma_r(A) with r the numerical rank at epsilon.
double rho(const MatD& a, double epsilon = 1e-12);

// Partial-pivot LU solve; nullopt when a pivot falls below tiny * max|a|.
std::optional<std::vector<double>> solve(const MatD& a, const std::vector<double>& b, double tiny = 1e-14);
std::optional<MatD> solve(const MatD& a, const MatD& b, double tiny = 1e-14);

// Minimum-norm least-squares solution with singular values below rcond*sigma_1 discarded.
std::vector<double> lstsq(const MatD& a, const std::vector<double>& b, double rcond = 1e-13);

// ---- exact ----

struct Rref {
  MatQ reduced;                     // reduced row echelon form, zero rows removed
  std::vector<std::size_t> pivots;  // pivot column per row
  bool consistent = true;           // only meaningful for augmented systems
};

// Pivots are taken in the given column order (defaults to natural order).
Rref rref(const MatQ& a, const std::vector<std::size_t>& column_order = {});

std::size_t rank(const MatQ& a);
Rational determinant(MatQ a);
std::optional<MatQ> inverse(const MatQ& a);
std::optional<std::vector<Rational>> solve(const MatQ& a, const std::vector<Rational>& b);

// Solution set of A x = b as x = particular + nullspace * t; nullopt if inconsistent.
struct AffineSolution {
  std::vector<Rational> particular;
  MatQ nullspace;  // q x d
  std::vector<std::size_t> free_columns;
};
std::optional<AffineSolution> solve_affine(const MatQ& a, const std::vector<Rational>& b,
                                           const std::vector<std::size_t>& column_order = {});

// True iff symmetric A is positive definite (exact LDL^T pivots all positive).
bool is_positive_definite(const MatQ& a);
// Number of positive, negative and zero eigenvalues (Sylvester, exact).
struct Inertia {
  std::size_t positive = 0, negative = 0, zero = 0;
};
Inertia inertia(const MatQ& a);

// Largest rational mu (from a candidate ladder) with A - mu I positive definite, or nullopt.
std::optional<Rational> exact_min_eig_lower_bound(const MatQ& a);

}  // namespace lmicert
