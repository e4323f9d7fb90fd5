#pragma once

#include <string>

#include <boost/multiprecision/gmp.hpp>

namespace staircase {

using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

inline std::string to_decimal(const BigInt& v) { return v.str(); }

inline BigInt parse_bigint(const std::string& s) { return BigInt(s); }

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline long double to_long_double(const Rational& q) {
    // mpq -> long double goes through mpf precision; long double is enough for the Gram layer.
    return static_cast<long double>(numerator_of(q).convert_to<long double>()) /
           static_cast<long double>(denominator_of(q).convert_to<long double>());
}

/// "num/den" with the sign carried by the numerator.
inline std::string to_fraction(const Rational& q) {
    return numerator_of(q).str() + "/" + denominator_of(q).str();
}

Rational parse_fraction(const std::string& s);

BigInt ipow(const BigInt& base, unsigned exponent);

}  // namespace staircase
