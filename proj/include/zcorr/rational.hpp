#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace zcorr {

/// Arbitrary-precision rational scalar used wherever results must be exact
/// (series coefficients, combinatorial identities).
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline BigInt factorial_big(int n) {
    if (n < 0) throw std::domain_error("factorial of negative argument");
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// C(a, t) for integer a >= -1, t >= 0, via the falling-factorial product.
/// The a = -1 row follows the generalized-binomial convention C(-1,0) = 1,
/// C(t-1,t) = 0 for t >= 1, which the t-expansion of the pair correlator
/// relies on in complex dimension one.
inline Rational binomial_rat(int a, int t) {
    if (t < 0) throw std::domain_error("binomial with negative lower index");
    Rational r = 1;
    for (int i = 1; i <= t; ++i) r *= Rational(a - t + i, i);
    return r;
}

/// Decimal-free rendering: "p/q", or just "p" when the denominator is one.
inline std::string rational_to_string(const Rational& x) {
    if (denominator(x) == 1) return numerator(x).str();
    return numerator(x).str() + "/" + denominator(x).str();
}

inline double rational_to_double(const Rational& x) {
    return x.template convert_to<double>();
}

} // namespace zcorr
