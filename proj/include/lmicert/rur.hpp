#pragma once

#include "lmicert/interval.hpp"
#include "lmicert/upoly.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lmicert {

class RurParseError : public std::runtime_error {
 public:
  RurParseError(std::size_t offset, const std::string& what)
      : std::runtime_error("RUR parse error at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Coordinate i is numerators[i](t) / (divisors[i] * q0(t)) at the real roots of q.
//
// Text form (one bracketed list terminated by ':'):
//   [0, [0, nvars, deg, [names], [linear form],
//        [[deg q, [coeffs]], [deg q0, [coeffs]], [[[deg, [coeffs]], divisor], ...]]]]:
// coefficients ascending, integers or p/q. "[1, ...]:" signals a positive-dimensional
// ideal and "[-1]:" an empty one.
struct Rur {
  enum class Kind { ZeroDimensional, PositiveDimensional, Empty };
  Kind kind = Kind::ZeroDimensional;
  std::vector<std::string> var_names;
  std::vector<Rational> linear_form;
  UPoly q, q0;
  std::vector<UPoly> numerators;
  std::vector<Rational> divisors;
};

Rur parse_rur(const std::string& text);
std::string format_rur(const Rur& rur);

struct RurPoint {
  Interval t;
  std::vector<Interval> coords;
};

struct RurPoints {
  std::vector<RurPoint> points;
  bool squarefree_taken = false;  // q had repeated factors and was replaced by its squarefree part
};

// Sturm isolation of the real roots of q, refined to width, then interval evaluation of every coordinate.
RurPoints rur_real_points(const Rur& rur, const Rational& width = Rational(1L, 1000000000000L));

enum class PsdVerdict { Accepted, Rejected, Undecided };
std::string to_string(PsdVerdict v);

struct PsdScreen {
  PsdVerdict verdict = PsdVerdict::Undecided;
  std::optional<Rational> margin;  // lower bound on lambda_min of the iota block when accepted
  std::string reason;
};

// Accepts when the iota principal block is provably positive definite over the enclosure (with the
// kernel equations forcing the complementary Schur block to vanish); rejects when every matrix in the
// enclosure has a negative eigenvalue; undecided otherwise.
PsdScreen psd_screen(const IntervalMatrix& x, const std::vector<std::size_t>& iota);

}  // namespace lmicert
