#include "qpr/exact.hpp"

#include <cmath>
#include <stdexcept>

#include "qpr/operator_core.hpp"

namespace qpr {

std::string to_string(ArithmeticMode mode) {
    return mode == ArithmeticMode::Exact ? "exact" : "float";
}

ArithmeticMode parse_mode(std::string_view text) {
    if (text == "exact") return ArithmeticMode::Exact;
    if (text == "float") return ArithmeticMode::Float;
    throw InvalidArgumentError("unknown arithmetic mode '" + std::string(text) +
                               "' (expected exact or float)");
}

Rational rationalize(double x, double tol) {
    using boost::multiprecision::mpz_int;
    if (!std::isfinite(x)) throw InvalidArgumentError("cannot rationalize a non-finite value");
    // Convergents of the continued fraction of the exact binary value of x;
    // the expansion terminates, so the loop always returns.
    const Rational target(x);
    const Rational bound(tol);
    Rational rem = target;
    mpz_int h1 = 1, h2 = 0, k1 = 0, k2 = 1;
    for (;;) {
        mpz_int a = numerator(rem) / denominator(rem);
        if (numerator(rem) < 0 && a * denominator(rem) != numerator(rem)) a -= 1;
        const mpz_int h = a * h1 + h2;
        const mpz_int k = a * k1 + k2;
        h2 = h1;
        h1 = h;
        k2 = k1;
        k1 = k;
        const Rational approx(h, k);
        const Rational frac = rem - Rational(a);
        if (abs(approx - target) <= bound || frac == 0) return approx;
        rem = 1 / frac;
    }
}

std::string to_string(const Rational& value) {
    if (denominator(value) == 1) return numerator(value).str();
    return numerator(value).str() + "/" + denominator(value).str();
}

Rational parse_rational(std::string_view text) {
    try {
        return Rational(std::string(text));
    } catch (const std::exception&) {
        throw InvalidArgumentError("malformed rational '" + std::string(text) + "'");
    }
}

}  // namespace qpr
