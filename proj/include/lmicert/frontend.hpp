#pragma once

#include "lmicert/instance.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace lmicert {

struct FrontendOptions {
  double tol = 1e-9;
  std::size_t max_iter = 50000;  // cap on alternating-projection sweeps per restart
  std::size_t restarts = 8;
  std::uint64_t seed = 1;
  std::optional<double> eps1;  // rank threshold; defaults to sqrt(tol)
  bool parallel = true;
};

// Sweeps per restart actually used: min(max_iter, this).
constexpr std::size_t kDykstraSweeps = 2000;

struct FrontendResult {
  SymD X_tilde;
  double residual = 0.0;  // ||A(X) - b||_2
  double min_eig = 0.0;
  std::size_t detected_rank = 0;
  std::size_t iterations = 0;
  std::size_t restarts_used = 0;
  bool converged = false;
  std::string message;

  // Recomputes residual and min_eig from X_tilde; true when they match the stored values.
  bool consistent(const SdpInstance& inst) const;
};

// Dykstra projections from random PSD starts, averaged, then polished by damped least squares on a factor.
FrontendResult find_feasible_point(const SdpInstance& inst, const FrontendOptions& opts = {});

// Frobenius projection onto {Z : A(Z) = b}; throws when b is outside the range of the map.
SymD project_affine(const SdpInstance& inst, const SymD& x);
SymD project_psd(const SymD& x);

}  // namespace lmicert
