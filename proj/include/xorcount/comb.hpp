#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "xorcount/bigint.hpp"
#include "xorcount/lognum.hpp"

namespace xorcount {

/// ln C(n, w). Exact integer path for n <= 60, log-gamma beyond.
LogNum log_binomial(std::size_t n, std::size_t w);

/// Exact row C(n, 0..n) with prefix sums sum_{j=1}^{w} C(n, j) and logs.
class BinomialRow {
 public:
  explicit BinomialRow(std::size_t n);

  std::size_t n() const { return n_; }
  const BigInt& binomial(std::size_t w) const { return binom_[w]; }
  /// sum_{j=1}^{w} C(n, j); prefix(0) = 0.
  const BigInt& prefix(std::size_t w) const { return prefix_[w]; }
  double log_binomial(std::size_t w) const { return log_binom_[w]; }

  /// Largest w with prefix(w) <= q - 1, or 0 when even w = 1 fails.
  std::size_t w_star(const BigInt& q) const;

 private:
  std::size_t n_;
  std::vector<BigInt> binom_;
  std::vector<BigInt> prefix_;
  std::vector<double> log_binom_;
};

/// Shared, lazily built rows. Thread-safe.
std::shared_ptr<const BinomialRow> binomial_row(std::size_t n);

std::size_t w_star(std::size_t n, const BigInt& q);

struct EpsilonInputs {
  std::size_t n = 0;
  std::size_t m = 0;
  BigInt q = 2;
  double f = 0.5;

  /// 1 <= m <= n, 0 <= f <= 1/2, 2 <= q <= 2^n + 1.
  void validate() const;
};

// Worst-case collision quantities for a fixed (n, m, f). With x = 1 - 2f,
//
//   eps(q)  = [ sum_{w=1}^{w*} C(n,w) g(w) + r g(w*+1) ] / (q - 1),
//   g(w)    = ((1 + x^w) / 2)^m,   r = q - 1 - sum_{w<=w*} C(n,w).
//
// Writing 2^m (q-1) eps(q) = (q - 1) + E(q) with the nonnegative excess
//
//   E(q) = sum_{w=1}^{w*} C(n,w) ((1+x^w)^m - 1) + r ((1+x^{w*+1})^m - 1)
//
// turns the variance bound into v(q) = q (2^m - 1 + E(q)) / 4^m, which has no
// cancellation, and the upper-bound predicate 1/(1 + 4^m v(z)/z^2) >= 3/4
// into the integer-vs-real comparison z + 3 - 3*2^m >= 3 E(z).
class CollisionModel {
 public:
  CollisionModel(std::size_t n, std::size_t m, double f);

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  double f() const { return f_; }

  /// Requires 2 <= q <= 2^n + 1.
  LogNum epsilon(const BigInt& q) const;
  /// E(q) above; zero at f = 1/2 and for q = 1.
  LogNum excess(const BigInt& q) const;
  /// v(q) for 1 <= q <= 2^n.
  LogNum variance_bound(const BigInt& q) const;
  /// ln(q^2 / v(q)).
  double log_concentration(const BigInt& q) const;
  /// 1/(1 + 4^m v(z)/z^2) >= 3/4, evaluated without rounding at f = 1/2.
  bool refutes(const BigInt& z) const;

 private:
  std::size_t n_;
  std::size_t m_;
  double f_;
  std::shared_ptr<const BinomialRow> row_;
  // Per w = 1..n+1: m * ln((1 + x^w)/2) and ln((1 + x^w)^m - 1).
  std::vector<double> log_cell_;
  std::vector<double> log_excess_;
  // Cumulative log-sums of C(n,w) * exp(term) over w = 1..k (index k).
  std::vector<double> prefix_cell_;
  std::vector<double> prefix_excess_;
};

LogNum epsilon(const EpsilonInputs& in);

/// v(q) = (q/2^m)(1 + eps(n,m,q,f)(q-1) - q/2^m).
LogNum variance_bound_v(const BigInt& q, std::size_t n, std::size_t m, double f);

/// U(n,m,f) = min{ z : 1/(1 + 4^m v(z)/z^2) >= 3/4 }, or 2^n when no z <= 2^n
/// qualifies. Exponential then binary search; the predicate is monotone
/// because z^2/v(z) increases in z.
BigInt upper_bound_threshold(std::size_t n, std::size_t m, double f);

inline constexpr double kDensityTolerance = 1e-5;

struct DensityCertificate {
  double f_star = 0.5;
  /// Largest probed density that violates the condition (f_star - f_below <= tolerance).
  double f_below = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  BigInt q;
  double slack_c = 0.0;  // log2(q) - m
  double delta = 0.0;
  double mu = 0.0;       // q / 2^m
  LogNum condition_value;  // eps(n, m, q, f_star)
  LogNum threshold;        // (mu/(delta-1) + mu - 1)/(q - 1)
  double tolerance = kDensityTolerance;
  bool met_at_half = true;
  bool mu_below_one = false;
};

/// Smallest f (within tolerance) with eps(n,m,q,f) <= (mu/(delta-1) + mu - 1)/(q-1),
/// mu = q/2^m. Returns f = 1/2 with met_at_half = false when even 1/2 fails.
DensityCertificate min_density_fstar(std::size_t n, std::size_t m, const BigInt& q, double delta,
                                     double tolerance = kDensityTolerance);

/// Same with q = 2^(m+c).
DensityCertificate min_density_fstar_slack(std::size_t n, std::size_t m, std::size_t c, double delta,
                                           double tolerance = kDensityTolerance);

enum class DensityRegime { lower, linear, sublinear };

struct AsymptoticParams {
  double m = 0;
  double kappa = 0;  // lower, sublinear: > 1
  double alpha = 0;  // linear: (0, 1]
  double beta = 0;   // sublinear: (0, 1)
};

/// Closed-form densities from the asymptotic analysis, natural log throughout:
///   lower      ln(m) / (kappa m)
///   linear     (3.6 - 1.25 log2(alpha)) ln(m) / m
///   sublinear  kappa (1 - beta) / (2 beta) ln(m)^2 / m
double asymptotic_density(DensityRegime regime, const AsymptoticParams& p);

}  // namespace xorcount
