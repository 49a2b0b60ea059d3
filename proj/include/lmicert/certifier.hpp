#pragma once

#include "lmicert/certificate.hpp"
#include "lmicert/frontend.hpp"
#include "lmicert/krawczyk.hpp"
#include "lmicert/pipeline.hpp"
#include "lmicert/rur.hpp"
#include "lmicert/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lmicert {

struct CertifyOptions {
  double tol = 1e-9;
  std::optional<double> eps1;  // default sqrt(tol)
  std::optional<double> eps2;  // default 1e3 * eps1
  std::uint64_t seed = 1;
  std::size_t retries = 4;     // fresh (phi, u) draws on the Lagrange path
  std::int64_t rational_bound = kDefaultRationalBound;
  bool exact_point = true;
  bool algebraic_curve = true;
  bool lagrange = true;
  KrawczykOptions krawczyk;
  std::string solver_bin;      // empty: no external solver
  double solver_timeout_s = kDefaultSolverTimeout;
  double timeout_s = 0.0;      // overall budget; 0 means none
  bool parallel_frontend = true;

  double epsilon1() const;
  double epsilon2() const;
};

struct StageNote {
  std::string stage;
  std::string detail;
  double seconds = 0.0;
};

struct CertifyOutcome {
  Certificate certificate;
  std::optional<FrontendResult> frontend;
  std::vector<StageNote> diagnostics;
  double frontend_seconds = 0.0;
  double total_seconds = 0.0;
  bool timed_out = false;

  bool certified() const { return certificate.status == CertStatus::CertifiedFeasible; }
};

// Frontend, chart, fixed system, then the certification strategies in order.
CertifyOutcome certify_hybrid(const SdpInstance& inst, const CertifyOptions& opts = {});

// Same pipeline from a given approximate maximum-rank point.
CertifyOutcome certify_from_point(const SdpInstance& inst, const SymD& x_tilde, const CertifyOptions& opts = {});

struct PsdCertification {
  CertStatus verdict = CertStatus::Inconclusive;
  std::optional<Rational> eig_margin;
  std::string reason;
};

// Eigenvalue/rank argument on the X-part of a certified box.
PsdCertification psd_certify(const Box& box, const std::vector<std::string>& box_vars, const ChartSelection& chart,
                             const std::vector<MultiPoly>& x_expressions);

// Line 1: variables; line 2: characteristic 0; then the polynomials with cleared denominators,
// separated by ",\n". Throws "empty system" when there is nothing to export.
std::string export_solver_input(const PolySystem& f);
PolySystem parse_solver_input(const std::string& text);

}  // namespace lmicert
