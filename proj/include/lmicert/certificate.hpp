#pragma once

#include "lmicert/instance.hpp"
#include "lmicert/interval.hpp"
#include "lmicert/poly.hpp"
#include "lmicert/upoly.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lmicert {

enum class CertStatus { CertifiedFeasible, Inconclusive };
// How feasibility was established:
//   exact-point     a rational matrix in P of rank r, checked by exact arithmetic;
//   algebraic-curve a root of a univariate polynomial on an affine line of P, isolated by Sturm sequences;
//   krawczyk        a Krawczyk box for the Lagrange system plus an interval eigenvalue margin;
//   rur             a real point of an external solver's parametrization passing the PSD screen.
enum class CertMethod { None, ExactPoint, AlgebraicCurve, Krawczyk, Rur };

std::string to_string(CertStatus s);
std::string to_string(CertMethod m);
CertStatus parse_status(const std::string& s);
CertMethod parse_method(const std::string& s);

struct Certificate {
  std::string instance;
  std::size_t n = 0, r = 0;
  std::vector<std::size_t> iota;     // 0-based; serialized 1-based
  std::vector<std::size_t> J_prime;  // hvec positions, 0-based; serialized 1-based
  std::vector<Rational> fixed_values;
  CertStatus status = CertStatus::Inconclusive;
  CertMethod method = CertMethod::None;
  std::vector<std::string> box_vars;
  Box box;
  std::optional<Rational> eig_margin;
  std::vector<Rational> phi;  // coefficients of the linear form over the fixed system's variables
  std::vector<Rational> u;
  std::uint64_t seed = 0;
  std::vector<std::string> narrative;

  // exact-point
  std::optional<SymQ> point;
  // algebraic-curve
  std::optional<SymQ> x0, x1;
  UPoly g;
  std::optional<Interval> t;
  // krawczyk and rur: the certified system and the map from its variables back to X
  std::vector<std::string> system_vars;
  std::vector<std::string> system_polys;
  std::vector<std::string> x_vars;         // variables of the X expressions
  std::vector<std::string> x_expressions;  // one per hvec position
  unsigned bits = 0;
  // rur
  std::string rur_text;
  std::size_t rur_index = 0;
};

// Canonical JSON: sorted keys, rationals as strings, two-space indent.
std::string to_json(const Certificate& c);
Certificate certificate_from_json(const std::string& text);

struct ReplayResult {
  bool ok = false;
  std::vector<std::string> checks;  // one line per passed check
  std::string failure;
};

// X at the centre of the certificate's box (exact point, curve at mid(t), or the X map at the box midpoint).
std::optional<SymQ> x_midpoint(const Certificate& c);

// Independent re-verification against the instance; never trusts eig_margin or the box as given.
ReplayResult replay(const Certificate& c, const SdpInstance& inst);

}  // namespace lmicert
