#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace qpr {

using Rational = boost::multiprecision::mpq_rational;

/// Arithmetic backend used by a computation.
enum class ArithmeticMode { Exact, Float };

std::string to_string(ArithmeticMode mode);
ArithmeticMode parse_mode(std::string_view text);

/**
 * Simplest rational within `tol` of `x`, found by walking the continued
 * fraction expansion of `x`. Values that are already short binary fractions
 * or simple ratios (1/3, -2/7, ...) are recovered exactly.
 */
Rational rationalize(double x, double tol = 1e-12);

/// "num/den" (or "num" when the denominator is 1).
std::string to_string(const Rational& value);
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace qpr
