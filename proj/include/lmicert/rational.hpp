#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lmicert {

using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p/q", "-p/q" or an integer; anything else throws std::invalid_argument.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

// Exact value of a binary64 number.
Rational exact_from_double(double x);
// Round to nearest binary64.
double to_double(const Rational& q);

// Best rational approximation with denominator at most max_den (continued fractions).
Rational rationalize(const Rational& x, const Integer& max_den);
Rational rationalize(double x, std::int64_t max_den);

// Outward rounding to a dyadic grid of 2^-bits.
Rational round_down(const Rational& x, unsigned bits);
Rational round_up(const Rational& x, unsigned bits);

Rational abs(const Rational& q);

std::vector<double> to_double(const std::vector<Rational>& v);

}  // namespace lmicert
