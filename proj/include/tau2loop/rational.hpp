#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace tau2 {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

/// "num/den" with den omitted when 1; parses the same format back.
std::string rational_to_string(const Rational& r);
Rational rational_from_string(const std::string& s);

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

BigInt binomial(long n, long k);
BigInt rising_factorial(long a, long k);
BigInt factorial(long n);

} // namespace tau2
