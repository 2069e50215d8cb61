#include "xorcount/lognum.hpp"

#include <algorithm>

#include "xorcount/error.hpp"

namespace xorcount {

LogNum LogNum::from_log(double log_value) {
  LogNum r;
  r.log_ = log_value;
  return r;
}

LogNum LogNum::from(double value) {
  if (!(value >= 0.0)) throw ParameterError("LogNum: negative or NaN value");
  return value == 0.0 ? zero() : from_log(std::log(value));
}

LogNum& LogNum::operator*=(LogNum rhs) {
  if (is_zero() || rhs.is_zero()) {
    *this = zero();
  } else {
    log_ += rhs.log_;
  }
  return *this;
}

LogNum& LogNum::operator/=(LogNum rhs) {
  if (rhs.is_zero()) throw ParameterError("LogNum: division by zero");
  if (!is_zero()) log_ -= rhs.log_;
  return *this;
}

LogNum& LogNum::operator+=(LogNum rhs) {
  if (rhs.is_zero()) return *this;
  if (is_zero()) return *this = rhs;
  const double hi = std::max(log_, rhs.log_);
  const double lo = std::min(log_, rhs.log_);
  log_ = hi + std::log1p(std::exp(lo - hi));
  return *this;
}

LogNum LogNum::subtract(LogNum a, LogNum b, bool* clamped) {
  if (clamped) *clamped = false;
  if (b.is_zero()) return a;
  if (b.log_ >= a.log_) {
    if (clamped && b.log_ > a.log_) *clamped = true;
    return zero();
  }
  return from_log(a.log_ + std::log1p(-std::exp(b.log_ - a.log_)));
}

LogNum LogNum::pow(double exponent) const {
  if (is_zero()) return exponent == 0.0 ? one() : zero();
  return from_log(log_ * exponent);
}

double log_sum_exp(std::span<const double> terms) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double t : terms) hi = std::max(hi, t);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - hi);
  return hi + std::log(sum);
}

}  // namespace xorcount
