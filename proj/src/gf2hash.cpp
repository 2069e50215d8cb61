#include "xorcount/gf2hash.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "xorcount/error.hpp"
#include "xorcount/rng.hpp"

namespace xorcount {

void HashParams::validate() const {
  if (!(f >= 0.0 && f <= 0.5)) throw ParameterError("density f must lie in [0, 1/2], got " + std::to_string(f));
  if (n == 0 || m == 0) throw ParameterError("hash needs n >= 1 and m >= 1");
  if (m > n) throw ParameterError("hash needs m <= n");
}

ParityHash::ParityHash(HashParams params, std::vector<BitVector> rows, BitVector rhs)
    : params_(params), rows_(std::move(rows)), rhs_(std::move(rhs)) {
  if (rows_.size() != params_.m || rhs_.size() != params_.m)
    throw DimensionError("ParityHash: expected " + std::to_string(params_.m) + " rows and rhs bits");
  for (const auto& r : rows_)
    if (r.size() != params_.n) throw DimensionError("ParityHash: row width differs from n");
}

ParityHash ParityHash::with_flipped_rhs(std::size_t i) const {
  BitVector b = rhs_;
  b.flip(i);
  return ParityHash(params_, rows_, std::move(b));
}

ParityHash sample_hash(const HashParams& params) {
  params.validate();
  BitSource src(params.seed);
  std::vector<BitVector> rows(params.m, BitVector(params.n));
  for (auto& row : rows)
    for (std::size_t j = 0; j < params.n; ++j)
      if (src.bernoulli(params.f)) row.set(j, true);
  BitVector b(params.m);
  for (std::size_t i = 0; i < params.m; ++i) b.set(i, src.coin());
  return ParityHash(params, std::move(rows), std::move(b));
}

BitVector apply_hash(const ParityHash& h, const Assignment& x) {
  if (x.size() != h.num_vars())
    throw DimensionError("apply_hash: assignment width " + std::to_string(x.size()) + " != n " +
                         std::to_string(h.num_vars()));
  BitVector out(h.num_constraints());
  for (std::size_t i = 0; i < h.num_constraints(); ++i) out.set(i, h.row(i).dot(x) != h.rhs().get(i));
  return out;
}

bool survives(const ParityHash& h, const Assignment& x) {
  if (x.size() != h.num_vars()) throw DimensionError("survives: assignment width differs from n");
  for (std::size_t i = 0; i < h.num_constraints(); ++i)
    if (h.row(i).dot(x) != h.rhs().get(i)) return false;
  return true;
}

std::size_t count_survivors(const ParityHash& h, std::span<const Assignment> set) {
  std::size_t c = 0;
  for (const auto& x : set)
    if (survives(h, x)) ++c;
  return c;
}

BigRational SurvivalPolynomial::scaled_probability(const BigRational& f) const {
  const std::size_t cells = m * n;
  const BigRational g = 1 - f;
  std::vector<BigRational> fp(cells + 1), gp(cells + 1);
  fp[0] = 1;
  gp[0] = 1;
  for (std::size_t k = 1; k <= cells; ++k) {
    fp[k] = fp[k - 1] * f;
    gp[k] = gp[k - 1] * g;
  }
  BigRational total = 0;
  for (std::size_t k = 0; k <= cells; ++k) {
    if (image_sizes[k] == 0) continue;
    total += BigRational{BigInt(image_sizes[k])} * fp[k] * gp[cells - k];
  }
  return total;
}

LogNum SurvivalPolynomial::probability(double f) const {
  const std::size_t cells = m * n;
  LogNum total = LogNum::zero();
  const LogNum pf = LogNum::from(f);
  const LogNum pg = LogNum::from(1.0 - f);
  for (std::size_t k = 0; k <= cells; ++k) {
    if (image_sizes[k] == 0) continue;
    total += LogNum::from(static_cast<double>(image_sizes[k])) * pf.pow(static_cast<double>(k)) *
             pg.pow(static_cast<double>(cells - k));
  }
  return total / LogNum::from(std::ldexp(1.0, static_cast<int>(m)));
}

SurvivalPolynomial exact_survival_polynomial(std::span<const Assignment> set, std::size_t n, std::size_t m) {
  if (m * n + m > kMaxExactSurvivalBits)
    throw CapacityError("exact survival needs m*n + m <= " + std::to_string(kMaxExactSurvivalBits) + ", got " +
                        std::to_string(m * n + m));
  std::vector<std::uint32_t> xs;
  xs.reserve(set.size());
  for (const auto& x : set) {
    if (x.size() != n) throw DimensionError("exact survival: element width differs from n");
    xs.push_back(n == 0 ? 0U : static_cast<std::uint32_t>(x.word(0)));
  }

  SurvivalPolynomial poly;
  poly.n = n;
  poly.m = m;
  poly.image_sizes.assign(m * n + 1, 0);
  if (xs.empty()) return poly;

  const std::uint64_t matrices = std::uint64_t{1} << (m * n);
  const std::uint32_t row_mask = n == 0 ? 0U : static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);
  std::vector<std::uint32_t> rows(m);
  std::vector<std::uint64_t> seen(((std::size_t{1} << m) + 63) / 64);
  std::vector<std::uint32_t> touched;
  for (std::uint64_t a = 0; a < matrices; ++a) {
    for (std::size_t i = 0; i < m; ++i) rows[i] = static_cast<std::uint32_t>(a >> (i * n)) & row_mask;
    std::uint64_t distinct = 0;
    touched.clear();
    for (std::uint32_t x : xs) {
      std::uint32_t y = 0;
      for (std::size_t i = 0; i < m; ++i) y |= static_cast<std::uint32_t>(std::popcount(rows[i] & x) & 1) << i;
      std::uint64_t& w = seen[y >> 6];
      const std::uint64_t bit = std::uint64_t{1} << (y & 63);
      if (!(w & bit)) {
        w |= bit;
        ++distinct;
        touched.push_back(y);
      }
    }
    for (std::uint32_t y : touched) seen[y >> 6] = 0;
    poly.image_sizes[static_cast<std::size_t>(std::popcount(a))] += distinct;
  }
  return poly;
}

LogNum exact_survival_probability(std::span<const Assignment> set, std::size_t m, double f) {
  if (!(f >= 0.0 && f <= 0.5)) throw ParameterError("density f must lie in [0, 1/2]");
  int exp = 0;
  const double mant = std::frexp(f, &exp);
  if (std::ldexp(mant, 20) != std::floor(std::ldexp(mant, 20)))
    throw ParameterError("exact survival needs f with at most 20 significand bits");
  if (set.empty()) return LogNum::zero();
  const std::size_t n = set.front().size();
  return exact_survival_polynomial(set, n, m).probability(f);
}

}  // namespace xorcount
