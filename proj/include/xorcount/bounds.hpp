#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "xorcount/bigint.hpp"
#include "xorcount/oracle.hpp"

namespace xorcount {

struct TrialRecord {
  std::uint64_t seed = 0;
  Answer outcome = Answer::unknown;  // sat: S(h) >= 1, unsat: S(h) = 0
  double solver_time_s = 0.0;
};

struct TrialOptions {
  Budget budget = Budget::zero();
  std::size_t jobs = 1;
};

/// Y successes out of T trials at (m, f).
struct SurvivalEstimate {
  std::size_t n = 0;
  std::size_t m = 0;
  double f = 0.5;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t unknown = 0;
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;
  double wall_time_s = 0.0;

  bool finalized() const { return unknown == 0; }
  /// Y / T. Throws InconclusiveError when any trial is unknown.
  double p_est() const;
};

/// Runs T independent trials; trial k uses hash seed trial_seed(seed, k).
/// Aggregation does not depend on completion order.
SurvivalEstimate estimate_survival(const Oracle& oracle, std::size_t m, double f, std::size_t trials,
                                   std::uint64_t seed, const TrialOptions& opts = {});

struct LowerBoundCertificate {
  std::size_t n = 0;
  std::size_t m = 0;
  double f = 0.5;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double kappa = 0.0;
  double c = 0.0;
  bool c_from_data = false;
  bool issued = false;
  /// m + log2 c - log2(1 + kappa) when issued, -inf otherwise.
  double bound_log2 = -std::numeric_limits<double>::infinity();
  double confidence = 0.0;
  double p_est = 0.0;
  std::uint64_t seed = 0;
  std::size_t m_candidates = 1;
  bool bonferroni = false;
  std::vector<TrialRecord> records;
  double wall_time_s = 0.0;
};

/// 1 - exp(-kappa^2 c T / ((1 + kappa)(2 + kappa))).
double lower_bound_confidence(double kappa, double c, std::size_t trials);

/// Issues |S| >= 2^m c / (1 + kappa) iff p_est >= c. Without an explicit c
/// the threshold is the realized p_est (already on the 1/T grid), recorded as
/// data-chosen.
LowerBoundCertificate lower_bound(const SurvivalEstimate& est, double kappa, std::optional<double> c = std::nullopt);

/// Best certificate over m in [m_lo, m_hi]. Each m runs on stream_seed(seed, m).
/// With bonferroni the failure probability is multiplied by the range size.
LowerBoundCertificate best_lower_bound(const Oracle& oracle, double f, std::size_t m_lo, std::size_t m_hi,
                                       std::size_t trials, double kappa, std::optional<double> c,
                                       std::uint64_t seed, bool bonferroni = false,
                                       const TrialOptions& opts = {});

struct UpperBoundCertificate {
  std::size_t n = 0;
  std::size_t m = 0;
  double f = 0.5;
  std::size_t trials = 0;
  double delta = 0.0;
  std::size_t empty_cells = 0;
  /// Strict majority of trials saw S(h) = 0.
  bool event_fired = false;
  BigInt verdict;  // U(n, m, f) if fired, else 2^n
  double verdict_log2 = 0.0;
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;
  double wall_time_s = 0.0;
};

/// ceil(24 ln(1/delta)).
std::size_t upper_bound_trials(double delta);

/// Throws InconclusiveError if any trial is unknown.
UpperBoundCertificate upper_bound(const Oracle& oracle, std::size_t m, double f, double delta, std::uint64_t seed,
                                  const TrialOptions& opts = {});

/// Evaluates the verdict for a fixed record of trial outcomes.
UpperBoundCertificate upper_bound_from_records(std::size_t n, std::size_t m, double f, double delta,
                                               std::uint64_t seed, std::vector<TrialRecord> records);

struct SparseCountConfig {
  double delta = 0.05;
  double alpha = 0.04;
  /// Density for i constraints; constant 1/2 when empty.
  std::function<double(std::size_t)> density;
  /// Last i tried; clamped to n.
  std::optional<std::size_t> max_i;
  /// Drop the ln n factor from T.
  bool drop_log_n = false;

  void validate() const;
  /// ceil(ln(1/delta)/alpha * ln n), or without ln n when drop_log_n.
  std::size_t trials(std::size_t n) const;
};

struct SparseCountLevel {
  std::size_t i = 0;
  double f = 0.5;
  std::size_t successes = 0;
};

struct SparseCountResult {
  /// i - 1 at the break, i.e. log2 of floor(2^(i-1)). Meaningless when below_one.
  int log2_estimate = 0;
  /// Broke at i = 0: S appears empty.
  bool below_one = false;
  /// Loop ran past max_i without breaking; estimate is max_i.
  bool exhausted = false;
  std::size_t trials = 0;
  std::vector<SparseCountLevel> levels;
  double wall_time_s = 0.0;
};

/// Median rule: the loop stops at the first i where at most T/2 trials found
/// a survivor.
SparseCountResult sparse_count(const Oracle& oracle, const SparseCountConfig& config, std::uint64_t seed,
                               const TrialOptions& opts = {});

/// Coarse sweep: m = 1, 2, 4, ... while p_est >= 1/2, then linear between the
/// last passing and first failing point. Returns the largest passing m, else 1.
std::size_t pick_promising_m(const Oracle& oracle, double f, std::size_t coarse_trials, std::uint64_t seed,
                             const TrialOptions& opts = {});

}  // namespace xorcount
