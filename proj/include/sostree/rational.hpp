#ifndef SOSTREE_RATIONAL_HPP
#define SOSTREE_RATIONAL_HPP

// Exact arbitrary-precision rationals for the derivation/verification paths.
// Doubles are dyadic, so Rational(double) is an exact embedding; that is what
// makes certified sign evaluation on floating-point grids possible.

#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace sostree {

using Rational = boost::multiprecision::cpp_rational;

inline Rational rational_pow(Rational base, unsigned exp) {
    Rational r(1);
    while (exp != 0) {
        if (exp & 1u) r *= base;
        base *= base;
        exp >>= 1u;
    }
    return r;
}

inline Rational rational_from_double(double x) {
    if (!std::isfinite(x))
        throw std::invalid_argument("rational_from_double: value must be finite");
    return Rational(x);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline int sign_of(const Rational& r) {
    if (r > 0) return 1;
    if (r < 0) return -1;
    return 0;
}

} // namespace sostree

#endif
