#include "xorcount/bigint.hpp"

#include <cmath>

#include "xorcount/error.hpp"

namespace xorcount {

BigInt pow2(std::uint64_t k) {
  BigInt x = 1;
  x <<= static_cast<unsigned>(k);
  return x;
}

double log_big(const BigInt& x) {
  if (x <= 0) throw ParameterError("log_big: argument must be positive");
  const std::size_t bits = boost::multiprecision::msb(x) + 1;
  if (bits <= 1000) return std::log(x.convert_to<double>());
  const std::size_t shift = bits - 64;
  const BigInt top = x >> static_cast<unsigned>(shift);
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * 0.69314718055994530942;
}

BigRational exact_rational(double x) {
  if (!std::isfinite(x)) throw ParameterError("exact_rational: non-finite value");
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  // mant * 2^53 is an integer for every finite binary64.
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  BigRational r{BigInt(scaled)};
  exp -= 53;
  if (exp >= 0) {
    r *= BigRational(pow2(static_cast<std::uint64_t>(exp)));
  } else {
    r /= BigRational(pow2(static_cast<std::uint64_t>(-exp)));
  }
  return r;
}

BigInt parse_big(const std::string& text) {
  try {
    BigInt v(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError("not an integer: '" + text + "'");
  }
}

}  // namespace xorcount
