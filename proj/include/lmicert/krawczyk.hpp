#pragma once

#include "lmicert/interval.hpp"
#include "lmicert/poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lmicert {

struct NewtonResult {
  std::vector<double> x;
  double residual = 0.0;          // ||F(x)||_2 at the returned iterate
  std::vector<double> step_norms;
  std::size_t iterations = 0;
  bool singular = false;          // stopped on a numerically singular Jacobian
};

// Plain Newton iteration; returns the last iterate without claiming convergence.
// Throws std::invalid_argument for a non-square system.
NewtonResult newton_refine(const PolySystem& f, std::vector<double> x0, std::size_t iters = 50);

struct InitialZ {
  std::vector<double> z;  // multipliers z_0..z_c
  double residual = 0.0;  // ||[J(phi,f)^T; u^T] z - e||_2
  bool redraw_u = false;  // no z with z^T u ~ 1 annihilates J(phi,f) at x
};

// Least-squares multipliers for the Lagrange rows at a point x of f's variables.
InitialZ initial_z(const PolySystem& f, const MultiPoly& phi, const std::vector<Rational>& u,
                   const std::vector<double>& x, double threshold = 1e-6);

struct KrawczykOptions {
  std::vector<double> radii{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10};
  unsigned bits = 96;  // dyadic grid for outward rounding of computed enclosures
};

struct KrawczykResult {
  bool certified = false;
  Box box;  // the box X with K(X) strictly inside X; K(X) itself when certified
  Box image;
  double radius = 0.0;
  std::string message;
};

// Existence and uniqueness of a zero of a square system in a box around center.
// Radii in the schedule are scaled by max(1, ||center||_inf).
KrawczykResult krawczyk_certify(const PolySystem& f, const std::vector<double>& center,
                                const KrawczykOptions& opts = {});

// The contraction test alone, for a given box with its midpoint as center; used by replay.
// The preconditioner is the exact dyadic image of the floating-point inverse of J(mid).
bool krawczyk_test(const PolySystem& f, const Box& box, unsigned bits, Box* image = nullptr,
                   std::string* message = nullptr);

}  // namespace lmicert
