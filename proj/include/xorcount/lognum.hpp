#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <span>

namespace xorcount {

// Nonnegative real carried as its natural logarithm. Zero is represented
// exactly (log = -inf) so that products and sums involving it stay exact.
class LogNum {
 public:
  constexpr LogNum() = default;

  static LogNum zero() { return LogNum{}; }
  static LogNum one() { return from_log(0.0); }
  static LogNum from_log(double log_value);
  static LogNum from(double value);

  bool is_zero() const { return log_ == -std::numeric_limits<double>::infinity(); }
  double log() const { return log_; }
  double log2() const { return log_ / 0.69314718055994530942; }
  /// Linear value; over- or underflows to inf / 0 outside binary64 range.
  double value() const { return is_zero() ? 0.0 : std::exp(log_); }

  LogNum& operator*=(LogNum rhs);
  LogNum& operator/=(LogNum rhs);
  LogNum& operator+=(LogNum rhs);

  friend LogNum operator*(LogNum a, LogNum b) { return a *= b; }
  friend LogNum operator/(LogNum a, LogNum b) { return a /= b; }
  friend LogNum operator+(LogNum a, LogNum b) { return a += b; }

  /// a - b, clamped to zero when b >= a. `clamped` is set if that happened
  /// with b strictly greater than a.
  static LogNum subtract(LogNum a, LogNum b, bool* clamped = nullptr);

  LogNum pow(double exponent) const;

  friend bool operator==(LogNum a, LogNum b) { return a.log_ == b.log_; }
  friend std::partial_ordering operator<=>(LogNum a, LogNum b) { return a.log_ <=> b.log_; }

 private:
  double log_ = -std::numeric_limits<double>::infinity();
};

/// log(sum(exp(terms))) with the usual max shift; -inf for an empty span.
double log_sum_exp(std::span<const double> terms);

}  // namespace xorcount
