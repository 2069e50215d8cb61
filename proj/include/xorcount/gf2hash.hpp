#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "xorcount/bigint.hpp"
#include "xorcount/bitvec.hpp"
#include "xorcount/lognum.hpp"

namespace xorcount {

/// Shape and density of an f-sparse hash family: m parity constraints over
/// n variables, each variable joining each constraint with probability f.
struct HashParams {
  std::size_t n = 0;
  std::size_t m = 0;
  double f = 0.5;
  std::uint64_t seed = 0;

  /// Throws ParameterError unless 1 <= m <= n and 0 <= f <= 1/2.
  void validate() const;

  friend bool operator==(const HashParams&, const HashParams&) = default;
};

/// One sampled hash h(x) = Ax + b over GF(2). Row i of A holds the
/// coefficients of constraint i. Immutable once built.
class ParityHash {
 public:
  ParityHash(HashParams params, std::vector<BitVector> rows, BitVector rhs);

  const HashParams& params() const { return params_; }
  std::size_t num_vars() const { return params_.n; }
  std::size_t num_constraints() const { return rows_.size(); }
  const std::vector<BitVector>& rows() const { return rows_; }
  const BitVector& row(std::size_t i) const { return rows_[i]; }
  const BitVector& rhs() const { return rhs_; }

  /// Copy with rhs bit i flipped.
  ParityHash with_flipped_rhs(std::size_t i) const;

  friend bool operator==(const ParityHash&, const ParityHash&) = default;

 private:
  HashParams params_;
  std::vector<BitVector> rows_;
  BitVector rhs_;
};

/// Draws A entry-by-entry (row-major, Bernoulli(f)) then b (fair coins)
/// from BitSource(params.seed).
ParityHash sample_hash(const HashParams& params);

/// h(x) as an m-bit vector.
BitVector apply_hash(const ParityHash& h, const Assignment& x);

/// True iff h(x) = 0.
bool survives(const ParityHash& h, const Assignment& x);

/// |S ∩ h^{-1}(0)|.
std::size_t count_survivors(const ParityHash& h, std::span<const Assignment> set);

// Exact survival probability by enumerating every matrix A. For a fixed A the
// set survives iff b lies in the image {Ax : x in S}, so
//   Pr[S(h) >= 1] = 2^-m * sum_A Pr[A] * |A S|.
// Grouping matrices by their number of ones k gives integer coefficients
//   image_sizes[k] = sum over A with k ones of |A S|,
// and 2^m Pr = sum_k image_sizes[k] f^k (1-f)^(mn-k).
struct SurvivalPolynomial {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::uint64_t> image_sizes;  // indexed by k = 0..m*n

  /// 2^m * Pr[S(h) >= 1], exactly.
  BigRational scaled_probability(const BigRational& f) const;
  LogNum probability(double f) const;
};

inline constexpr std::size_t kMaxExactSurvivalBits = 24;

/// Requires mn + m <= 24 (CapacityError otherwise) and elements of equal width.
SurvivalPolynomial exact_survival_polynomial(std::span<const Assignment> set, std::size_t n, std::size_t m);

/// Pr[S(h) >= 1] for h drawn from the (m, f) family. f must carry at most 20
/// significand bits so the weights stay exact.
LogNum exact_survival_probability(std::span<const Assignment> set, std::size_t m, double f);

}  // namespace xorcount
