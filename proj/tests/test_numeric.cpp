#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "xorcount/bigint.hpp"
#include "xorcount/bitvec.hpp"
#include "xorcount/error.hpp"
#include "xorcount/lognum.hpp"
#include "xorcount/rng.hpp"

using namespace xorcount;

TEST_CASE("LogNum arithmetic") {
  const LogNum a = LogNum::from(3.0);
  const LogNum b = LogNum::from(5.0);
  CHECK((a + b).value() == doctest::Approx(8.0));
  CHECK((a * b).value() == doctest::Approx(15.0));
  CHECK((b / a).value() == doctest::Approx(5.0 / 3.0));
  CHECK(LogNum::subtract(b, a).value() == doctest::Approx(2.0));
  CHECK(a.pow(3).value() == doctest::Approx(27.0));
  CHECK((LogNum::zero() + a) == a);
  CHECK((LogNum::zero() * a).is_zero());
  CHECK(a < b);
  CHECK(LogNum::from_log(1e6).log2() == doctest::Approx(1e6 / std::log(2.0)));
}

TEST_CASE("LogNum subtraction clamps and reports") {
  bool clamped = false;
  CHECK(LogNum::subtract(LogNum::from(2.0), LogNum::from(3.0), &clamped).is_zero());
  CHECK(clamped);
  clamped = false;
  LogNum::subtract(LogNum::from(3.0), LogNum::from(2.0), &clamped);
  CHECK_FALSE(clamped);
}

TEST_CASE("log_sum_exp handles huge terms") {
  const std::vector<double> t{1000.0, 1000.0, -INFINITY};
  CHECK(log_sum_exp(t) == doctest::Approx(1000.0 + std::log(2.0)));
  CHECK(log_sum_exp(std::vector<double>{}) == -INFINITY);
}

TEST_CASE("big integer helpers") {
  CHECK(pow2(70) == BigInt(1) << 70);
  CHECK(log_big(pow2(4000)) == doctest::Approx(4000 * std::log(2.0)).epsilon(1e-14));
  CHECK(log2_big(BigInt(1024)) == doctest::Approx(10.0));
  CHECK(parse_big("123456789012345678901234567890") == BigInt("123456789012345678901234567890"));
  CHECK_THROWS_AS(parse_big("12x"), ParseError);
  CHECK(exact_rational(0.375) == BigRational(3, 8));
  CHECK(exact_rational(-2.5) == BigRational(-5, 2));
}

TEST_CASE("rng contract") {
  std::mt19937_64 ref(42);
  BitSource src(42);
  const std::uint64_t u = ref();
  CHECK(src.bernoulli(0.3) == (static_cast<double>(u >> 11) < 0.3 * 9007199254740992.0));
  CHECK(src.coin() == ((ref() >> 63) != 0));
  CHECK(trial_seed(5, 3) == (5 ^ splitmix64(3)));
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(stream_seed(1, 2) != stream_seed(1, 3));
  BitSource never(1);
  for (int i = 0; i < 100; ++i) CHECK_FALSE(never.bernoulli(0.0));
  for (int i = 0; i < 100; ++i) CHECK(never.below(7) < 7);
}

TEST_CASE("BitVector basics") {
  auto v = BitVector::from_string("1011000000000000000000000000000000000000000000000000000000000000001");
  CHECK(v.size() == 67);
  CHECK(v.count() == 4);
  CHECK(v.get(0));
  CHECK_FALSE(v.get(1));
  CHECK(v.get(66));
  CHECK(BitVector::from_string(v.to_string()) == v);
  BitVector w(67);
  w.set(0, true);
  w.set(2, true);
  CHECK_THROWS_AS(BitVector::from_word(1, 65), DimensionError);
  CHECK(v.dot(w) == false);  // bits 0 and 2 overlap
  w.flip(66);
  CHECK(v.dot(w) == true);
  CHECK(BitVector(5).none());
  CHECK(BitVector::from_string("10") < BitVector::from_string("01"));  // word order, bit 0 lowest
}
