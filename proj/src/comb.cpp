#include "xorcount/comb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "xorcount/error.hpp"

namespace xorcount {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lse2(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// ln(e^y - 1) for y >= 0.
double log_expm1(double y) {
  if (y <= 0.0) return kNegInf;
  if (y > 30.0) return y + std::log1p(-std::exp(-y));
  return std::log(std::expm1(y));
}

void check_density(double f) {
  if (!(f >= 0.0 && f <= 0.5)) throw ParameterError("density f must lie in [0, 1/2], got " + std::to_string(f));
}

}  // namespace

LogNum log_binomial(std::size_t n, std::size_t w) {
  if (w > n) throw ParameterError("log_binomial: w > n");
  if (n <= 60) {
    std::uint64_t c = 1;  // C(60, 30) * 60 still fits
    const std::size_t k = std::min(w, n - w);
    for (std::size_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return LogNum::from(static_cast<double>(static_cast<std::uint64_t>(c)));
  }
  const double nn = static_cast<double>(n);
  const double ww = static_cast<double>(w);
  return LogNum::from_log(std::lgamma(nn + 1) - std::lgamma(ww + 1) - std::lgamma(nn - ww + 1));
}

BinomialRow::BinomialRow(std::size_t n) : n_(n), binom_(n + 1), prefix_(n + 1), log_binom_(n + 1) {
  binom_[0] = 1;
  for (std::size_t w = 1; w <= n; ++w) binom_[w] = binom_[w - 1] * (n - w + 1) / w;
  prefix_[0] = 0;
  for (std::size_t w = 1; w <= n; ++w) prefix_[w] = prefix_[w - 1] + binom_[w];
  for (std::size_t w = 0; w <= n; ++w) log_binom_[w] = log_big(binom_[w]);
}

std::size_t BinomialRow::w_star(const BigInt& q) const {
  const BigInt limit = q - 1;
  // prefix_ is nondecreasing; find the last index with prefix <= limit.
  auto it = std::upper_bound(prefix_.begin(), prefix_.end(), limit);
  return static_cast<std::size_t>(it - prefix_.begin()) - 1;
}

std::shared_ptr<const BinomialRow> binomial_row(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const BinomialRow>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const BinomialRow>(n);
  return slot;
}

std::size_t w_star(std::size_t n, const BigInt& q) {
  if (q < 2) throw ParameterError("w_star: q must be at least 2");
  return binomial_row(n)->w_star(q);
}

void EpsilonInputs::validate() const {
  if (m < 1 || m > n) throw ParameterError("epsilon: need 1 <= m <= n");
  check_density(f);
  if (q < 2 || q > pow2(n) + 1) throw ParameterError("epsilon: need 2 <= q <= 2^n + 1");
}

CollisionModel::CollisionModel(std::size_t n, std::size_t m, double f)
    : n_(n),
      m_(m),
      f_(f),
      row_(binomial_row(n)),
      log_cell_(n + 2, kNegInf),
      log_excess_(n + 2, kNegInf),
      prefix_cell_(n + 2, kNegInf),
      prefix_excess_(n + 2, kNegInf) {
  if (n < 1 || m < 1 || m > n) throw ParameterError("collision model: need 1 <= m <= n");
  check_density(f);
  const double x = 1.0 - 2.0 * f;
  const double md = static_cast<double>(m);
  for (std::size_t w = 1; w <= n + 1; ++w) {
    const double l1p = std::log1p(std::pow(x, static_cast<double>(w)));
    log_cell_[w] = md * (l1p - kLn2);
    log_excess_[w] = log_expm1(md * l1p);
  }
  for (std::size_t w = 1; w <= n; ++w) {
    prefix_cell_[w] = lse2(prefix_cell_[w - 1], row_->log_binomial(w) + log_cell_[w]);
    prefix_excess_[w] = lse2(prefix_excess_[w - 1], row_->log_binomial(w) + log_excess_[w]);
  }
}

LogNum CollisionModel::epsilon(const BigInt& q) const {
  if (q < 2 || q > pow2(n_) + 1) throw ParameterError("epsilon: need 2 <= q <= 2^n + 1");
  const std::size_t w = row_->w_star(q);
  const BigInt r = q - 1 - row_->prefix(w);
  double total = prefix_cell_[w];
  if (r > 0) total = lse2(total, log_big(r) + log_cell_[w + 1]);
  return LogNum::from_log(total - log_big(q - 1));
}

LogNum CollisionModel::excess(const BigInt& q) const {
  if (q < 1) throw ParameterError("excess: q must be positive");
  if (q == 1) return LogNum::zero();
  const std::size_t w = row_->w_star(q);
  const BigInt r = q - 1 - row_->prefix(w);
  double total = prefix_excess_[w];
  if (r > 0) total = lse2(total, log_big(r) + log_excess_[w + 1]);
  return LogNum::from_log(total);
}

LogNum CollisionModel::variance_bound(const BigInt& q) const {
  const double md = static_cast<double>(m_);
  // 2^m - 1 + E(q), then * q / 4^m.
  const LogNum base = LogNum::from_log(md * kLn2 + std::log1p(-std::exp(-md * kLn2)));
  return LogNum::from_log(log_big(q)) * (base + excess(q)) / LogNum::from_log(2.0 * md * kLn2);
}

double CollisionModel::log_concentration(const BigInt& q) const {
  return 2.0 * log_big(q) - variance_bound(q).log();
}

bool CollisionModel::refutes(const BigInt& z) const {
  const BigInt slack = z + 3 - 3 * pow2(m_);
  if (slack < 0) return false;
  const LogNum e = excess(z);
  if (e.is_zero()) return true;
  if (slack == 0) return false;
  return log_big(slack) >= std::log(3.0) + e.log();
}

LogNum epsilon(const EpsilonInputs& in) {
  in.validate();
  return CollisionModel(in.n, in.m, in.f).epsilon(in.q);
}

LogNum variance_bound_v(const BigInt& q, std::size_t n, std::size_t m, double f) {
  if (q < 1 || q > pow2(n)) throw ParameterError("variance bound: need 1 <= q <= 2^n");
  return CollisionModel(n, m, f).variance_bound(q);
}

BigInt upper_bound_threshold(std::size_t n, std::size_t m, double f) {
  const CollisionModel model(n, m, f);
  const BigInt limit = pow2(n);
  if (!model.refutes(limit)) return limit;
  if (model.refutes(1)) return 1;
  BigInt lo = 1;  // fails
  BigInt hi = 2;
  while (hi < limit && !model.refutes(hi)) {
    lo = hi;
    hi <<= 1;
  }
  if (hi > limit) hi = limit;
  // Invariant: refutes(lo) == false, refutes(hi) == true.
  while (hi - lo > 1) {
    const BigInt mid = (lo + hi) >> 1;
    if (model.refutes(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

DensityCertificate min_density_fstar(std::size_t n, std::size_t m, const BigInt& q, double delta,
                                     double tolerance) {
  if (!(delta > 2.0)) throw ParameterError("min_density_fstar: delta must exceed 2");
  if (m < 1 || m > n) throw ParameterError("min_density_fstar: need 1 <= m <= n");
  if (q < 2 || q > pow2(n) + 1) throw ParameterError("min_density_fstar: need 2 <= q <= 2^n + 1");
  if (!(tolerance > 0.0)) throw ParameterError("min_density_fstar: tolerance must be positive");

  DensityCertificate cert;
  cert.n = n;
  cert.m = m;
  cert.q = q;
  cert.delta = delta;
  cert.tolerance = tolerance;
  const double log_mu = log_big(q) - static_cast<double>(m) * kLn2;
  cert.slack_c = log_mu / kLn2;
  cert.mu = std::exp(log_mu);
  cert.mu_below_one = log_mu < 0.0;

  // mu/(delta-1) + mu - 1 = mu * delta/(delta-1) - 1
  const LogNum scaled = LogNum::from_log(log_mu + std::log(delta / (delta - 1.0)));
  bool negative = false;
  const LogNum numerator = LogNum::subtract(scaled, LogNum::one(), &negative);
  if (numerator.is_zero()) {
    cert.threshold = LogNum::zero();
    cert.met_at_half = false;
    cert.f_star = 0.5;
    cert.f_below = 0.5;
    cert.condition_value = CollisionModel(n, m, 0.5).epsilon(q);
    return cert;
  }
  cert.threshold = numerator / LogNum::from_log(log_big(q - 1));

  auto eps_at = [&](double f) { return CollisionModel(n, m, f).epsilon(q); };
  const LogNum at_half = eps_at(0.5);
  if (at_half > cert.threshold) {
    cert.met_at_half = false;
    cert.f_star = 0.5;
    cert.f_below = 0.5;
    cert.condition_value = at_half;
    return cert;
  }
  if (eps_at(0.0) <= cert.threshold) {
    cert.f_star = 0.0;
    cert.f_below = 0.0;
    cert.condition_value = eps_at(0.0);
    return cert;
  }
  double lo = 0.0;  // violates
  double hi = 0.5;  // satisfies
  LogNum at_hi = at_half;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    const LogNum e = eps_at(mid);
    if (e <= cert.threshold) {
      hi = mid;
      at_hi = e;
    } else {
      lo = mid;
    }
  }
  cert.f_star = hi;
  cert.f_below = lo;
  cert.condition_value = at_hi;
  return cert;
}

DensityCertificate min_density_fstar_slack(std::size_t n, std::size_t m, std::size_t c, double delta,
                                           double tolerance) {
  return min_density_fstar(n, m, pow2(m + c), delta, tolerance);
}

double asymptotic_density(DensityRegime regime, const AsymptoticParams& p) {
  if (!(p.m > 1.0)) throw ParameterError("asymptotic_density: m must exceed 1");
  const double lm = std::log(p.m);
  switch (regime) {
    case DensityRegime::lower:
      if (!(p.kappa > 1.0)) throw ParameterError("asymptotic_density: kappa must exceed 1");
      return lm / (p.kappa * p.m);
    case DensityRegime::linear:
      if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw ParameterError("asymptotic_density: alpha must lie in (0, 1]");
      return (3.6 - 1.25 * std::log2(p.alpha)) * lm / p.m;
    case DensityRegime::sublinear:
      if (!(p.beta > 0.0 && p.beta < 1.0)) throw ParameterError("asymptotic_density: beta must lie in (0, 1)");
      if (!(p.kappa > 1.0)) throw ParameterError("asymptotic_density: kappa must exceed 1");
      return p.kappa * (1.0 - p.beta) / (2.0 * p.beta) * lm * lm / p.m;
  }
  throw ParameterError("asymptotic_density: unknown regime");
}

}  // namespace xorcount
