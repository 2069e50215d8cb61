#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace xorcount {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// 2^k as a big integer.
BigInt pow2(std::uint64_t k);

/// Natural log of a positive big integer, accurate to ~1 ulp of binary64.
double log_big(const BigInt& x);

inline double log2_big(const BigInt& x) { return log_big(x) / 0.69314718055994530942; }

/// Exact rational value of a finite binary64.
BigRational exact_rational(double x);

BigInt parse_big(const std::string& text);

}  // namespace xorcount
