#pragma once

// Exact rationals backed by GMP.

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace wh {

using Rational = mpq_class;

/// Accepts "p/q", integers, and finite decimals such as "0.125" or "-1.5e-3".
/// Decimals are converted exactly. Throws ParseError.
Rational parse_rational(std::string_view text);

/// Exact value of a finite double.
Rational rational_from_double(double x);

std::string to_string(const Rational& q);
double to_double(const Rational& q);

}  // namespace wh
