#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace zqlab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) { return Rational(BigInt(num), BigInt(den)); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// "num/den", or just "num" for integers.
inline std::string to_string(const Rational& r) {
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline Rational rational_pow(const Rational& base, unsigned exp) {
    Rational out = 1;
    for (unsigned i = 0; i < exp; ++i) out *= base;
    return out;
}

}  // namespace zqlab
