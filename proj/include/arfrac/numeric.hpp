#pragma once

// Exact arithmetic vocabulary shared by every module: arbitrary-precision
// integers and rationals (GMP), parsing, and overflow-free logarithms.

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace arfrac {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses a decimal integer with optional sign. Throws Error(ParseError).
Integer parse_integer(std::string_view text);

/// Parses "p", "p/q" or "-p/q" into a canonical rational.
Rational parse_rational(std::string_view text);

std::string to_string(const Integer& value);
std::string to_string(const Rational& value);

/// Natural logarithm of |value| for arbitrarily large integers. value != 0.
double log_abs(const Integer& value);

/// log(max(|value|, 1)); zero maps to 0.
double log_max1(const Integer& value);

/// Converts a nonnegative real bound to the largest integer not exceeding it,
/// snapping values within a relative 1e-9 of an integer onto that integer.
Integer floor_bound(double value);

/// Same snapping rule applied to exp(log_value).
Integer floor_exp_bound(double log_value);

/// Ratio num/den as a double without intermediate overflow.
double ratio_to_double(const Integer& num, const Integer& den);

/// Formats with 15 significant digits (the output contract for CSV/JSON).
std::string format_real(double value);

}  // namespace arfrac
